//! Cavity Born-Oppenheimer pipeline on a 15-point electron in a cavity,
//! checked against a separately written brute-force construction.

use cavity_bo::cbo::{
    assemble_surfaces, compare_exact_cbo, diagonal_kinetic_correction, solve_all, solve_conditional, MatterConditional,
    Mesh,
};
use cavity_bo::model::{HamiltonianAssembly, MatterLayout, MatterOperators, PhotonBasis, PhotonMode};
use cavity_bo::quantity::{CsrMatrix, Grid1D};
use cavity_bo::spectra::dense_operator_eigh;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use std::f64::consts::PI;
use std::sync::Arc;

const N: usize = 15;
const H: f64 = 0.6;
const OMEGA: f64 = 0.25;

fn xs() -> Vec<f64> {
    (0..N).map(|i| (i as f64 - (N - 1) as f64 / 2.0) * H).collect()
}

fn potential(x: f64) -> f64 {
    0.05 * x.powi(4) - 0.4 * x * x + 0.03 * x
}

fn library_problem(lambda: f64, q_points: usize, dq: f64) -> (MatterOperators, PhotonMode) {
    let g = Grid1D::centered(N, H).unwrap();
    let t = cavity_bo::quantity::stencil::kinetic_1d(&g, 1.0, 2).unwrap();
    let x = xs();
    let h = t.add_scaled(1.0, &CsrMatrix::diagonal(&x.iter().map(|x| potential(*x)).collect::<Vec<_>>())).unwrap();
    let mode = PhotonMode::new(OMEGA, lambda, &[1.0], true, 30, Some(Grid1D::centered(q_points, dq).unwrap())).unwrap();
    let m = MatterOperators {
        dim: N,
        layout: MatterLayout::Custom { dim: N },
        hamiltonian: Arc::new(h),
        nuclear_kinetic: None,
        electron_dipole: Arc::new(CsrMatrix::diagonal(&x.iter().map(|x| -lambda * x).collect::<Vec<_>>())),
        nuclear_dipole: None,
        self_energy: Some(Arc::new(CsrMatrix::diagonal(&x.iter().map(|x| 0.5 * lambda * lambda * x * x).collect::<Vec<_>>()))),
    };
    (m, mode)
}

/// Electronic Hamiltonian at fixed q, built element by element.
fn h_at(q: f64, lambda: f64) -> DMatrix<f64> {
    let x = xs();
    let mut m = DMatrix::zeros(N, N);
    for i in 0..N {
        m[(i, i)] = 1.0 / (H * H) + potential(x[i]) - OMEGA * q * lambda * x[i] + 0.5 * lambda * lambda * x[i] * x[i];
        if i + 1 < N {
            m[(i, i + 1)] = -0.5 / (H * H);
            m[(i + 1, i)] = -0.5 / (H * H);
        }
    }
    m
}

struct Oracle {
    q: Vec<f64>,
    eps: Vec<Vec<f64>>,
    vecs: Vec<Vec<DVector<f64>>>,
}

fn oracle(lambda: f64, q_points: usize, dq: f64, j_max: usize) -> Oracle {
    let c = (q_points - 1) / 2;
    let q: Vec<f64> = (0..q_points).map(|i| (i as f64 - c as f64) * dq).collect();
    let mut eps = Vec::new();
    let mut vecs: Vec<Vec<DVector<f64>>> = Vec::new();
    for &qi in &q {
        let e = SymmetricEigen::new(h_at(qi, lambda));
        let mut order: Vec<usize> = (0..N).collect();
        order.sort_by(|a, b| e.eigenvalues[*a].total_cmp(&e.eigenvalues[*b]));
        eps.push(order.iter().take(j_max).map(|&k| e.eigenvalues[k]).collect());
        vecs.push(order.iter().take(j_max).map(|&k| e.eigenvectors.column(k).into_owned()).collect());
    }
    // sign continuity sweeping out from the centre
    let mut fix = |i: usize, from: usize| {
        for j in 0..j_max {
            if vecs[i][j].dot(&vecs[from][j]) < 0.0 {
                vecs[i][j] *= -1.0;
            }
        }
    };
    for i in (0..c).rev() {
        fix(i, i + 1);
    }
    for i in c + 1..q_points {
        fix(i, i - 1);
    }
    Oracle { q, eps, vecs }
}

fn oracle_dboc(o: &Oracle, dq: f64, i: usize, j: usize) -> f64 {
    let n = o.q.len();
    let (a, b, c) = if i == 0 {
        (0, 1, 2)
    } else if i == n - 1 {
        (n - 1, n - 2, n - 3)
    } else {
        (i - 1, i, i + 1)
    };
    let second = (&o.vecs[a][j] - 2.0 * &o.vecs[b][j] + &o.vecs[c][j]) / (dq * dq);
    -0.5 * o.vecs[i][j].dot(&second)
}

fn oracle_surface(o: &Oracle, dq: f64, j: usize) -> Vec<f64> {
    (0..o.q.len())
        .map(|i| o.eps[i][j] + 0.5 * OMEGA * OMEGA * o.q[i] * o.q[i] + oracle_dboc(o, dq, i, j))
        .collect()
}

fn oracle_levels(v: &[f64], dq: f64, k: usize) -> Vec<f64> {
    let n = v.len();
    let h = DMatrix::from_fn(n, n, |a, b| {
        let kin = if a == b {
            PI * PI / 3.0
        } else {
            let d = a as f64 - b as f64;
            2.0 * if (a + b) % 2 == 0 { 1.0 } else { -1.0 } / (d * d)
        } / (2.0 * dq * dq);
        kin + if a == b { v[a] } else { 0.0 }
    });
    let mut e: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    e.truncate(k);
    e
}

#[test]
fn pipeline_matches_brute_force() {
    let (lambda, qn, dq) = (0.4, 41, 0.5);
    let (m, mode) = library_problem(lambda, qn, dq);
    let mesh = Mesh::photon(mode.q_grid().unwrap().clone());
    let set = solve_conditional(&MatterConditional::new(m, &mode), &mesh, 3).unwrap();
    let o = oracle(lambda, qn, dq, 3);
    let dboc = diagonal_kinetic_correction(&set).unwrap();
    for p in 0..qn {
        for j in 0..3 {
            assert!((set.energies[p][j] - o.eps[p][j]).abs() < 1e-10, "ε at {p},{j}");
            assert!((dboc[p][j] - oracle_dboc(&o, dq, p, j)).abs() < 1e-9, "DBOC at {p},{j}");
        }
    }
    let surfaces = assemble_surfaces(&set, true).unwrap();
    let states = solve_all(&surfaces, 4).unwrap();
    for j in 0..3 {
        let v = oracle_surface(&o, dq, j);
        for (a, b) in surfaces[j].values.iter().zip(&v) {
            assert!((a - b).abs() < 1e-9);
        }
        let want = oracle_levels(&v, dq, 4);
        let mut got: Vec<f64> = states.iter().filter(|s| s.surface == j).map(|s| s.energy).collect();
        got.sort_by(|a, b| a.total_cmp(b));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-9, "surface {j}: {g} vs {w}");
        }
    }
}

#[test]
fn zero_coupling_cbo_is_exact() {
    let (m, mode) = library_problem(0.0, 61, 0.4);
    let asm = HamiltonianAssembly::new(m.clone(), &mode, PhotonBasis::Fock).unwrap();
    let exact = dense_operator_eigh(&asm.total(), 6);
    let mesh = Mesh::photon(mode.q_grid().unwrap().clone());
    let set = solve_conditional(&MatterConditional::new(m, &mode), &mesh, 3).unwrap();
    let cbo = solve_all(&assemble_surfaces(&set, true).unwrap(), 4).unwrap();
    for (e, c) in exact.values.iter().zip(&cbo) {
        assert!((e - c.energy).abs() < 1e-9, "{e} vs {}", c.energy);
    }
    for row in compare_exact_cbo(&asm, &exact, &set, &cbo).unwrap() {
        assert!(row.overlap_percent > 100.0 - 1e-6, "{row:?}");
    }
}

#[test]
fn cbo_ground_state_is_an_upper_bound() {
    for lambda in [0.1, 0.4, 0.8] {
        let (m, mode) = library_problem(lambda, 61, 0.4);
        let asm = HamiltonianAssembly::new(m.clone(), &mode, PhotonBasis::Fock).unwrap();
        let exact = dense_operator_eigh(&asm.total(), 1);
        let mesh = Mesh::photon(mode.q_grid().unwrap().clone());
        let set = solve_conditional(&MatterConditional::new(m, &mode), &mesh, 2).unwrap();
        let cbo = solve_all(&assemble_surfaces(&set, true).unwrap(), 1).unwrap();
        assert!(cbo[0].energy >= exact.values[0] - 1e-8, "λ = {lambda}");
    }
}
