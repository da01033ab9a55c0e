use super::WaveFunction;
use crate::cbo::ConditionalSolveSet;
use crate::error::{Error, Result};
use crate::model::PhotonBasis;
use crate::quantity::operator::LinearOperator;
use crate::C64;
use nalgebra::DMatrix;

/// Reduced photon density matrix ρ[n, m] = Σ_a C[a, n] C*[a, m].
pub fn photon_density_matrix(psi: &WaveFunction) -> DMatrix<C64> {
    let c = psi.as_matrix();
    c.transpose() * c.conjugate()
}

/// γ = Tr ρ² of the reduced photon state.
pub fn purity(psi: &WaveFunction) -> f64 {
    let rho = photon_density_matrix(psi);
    rho.iter().map(|z| z.norm_sqr()).sum()
}

fn fock_moments(psi: &WaveFunction) -> Result<(f64, f64)> {
    if psi.photon_basis != PhotonBasis::Fock {
        return Err(Error::RepresentationMismatch("photon-number moments need the Fock basis".into()));
    }
    let (mut n1, mut n2) = (0.0, 0.0);
    for (n, col) in psi.as_matrix().column_iter().enumerate() {
        let p: f64 = col.iter().map(|z| z.norm_sqr()).sum();
        let n = n as f64;
        n1 += n * p;
        n2 += n * (n - 1.0) * p;
    }
    Ok((n1, n2))
}

/// ⟨â†â⟩.
pub fn photon_number(psi: &WaveFunction) -> Result<f64> {
    Ok(fock_moments(psi)?.0)
}

/// Q = (⟨â†â†ââ⟩ − ⟨â†â⟩²)/⟨â†â⟩; `None` when the field is empty and Q is
/// undefined.
pub fn mandel_q(psi: &WaveFunction) -> Result<Option<f64>> {
    let (n1, n2) = fock_moments(psi)?;
    if n1 < 1e-12 {
        return Ok(None);
    }
    Ok(Some((n2 - n1 * n1) / n1))
}

/// ⟨Ψ|A ⊗ 1|Ψ⟩ for a matter operator A.
pub fn matter_expectation(psi: &WaveFunction, op: &dyn LinearOperator) -> Result<f64> {
    if op.dim() != psi.matter_dim {
        return Err(Error::DimensionMismatch { expected: psi.matter_dim, got: op.dim() });
    }
    let m = psi.matter_dim;
    let mut out = vec![C64::new(0.0, 0.0); m];
    let mut acc = 0.0;
    for block in psi.amplitudes.chunks(m) {
        op.apply_complex(block, &mut out);
        acc += block.iter().zip(&out).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    }
    Ok(acc)
}

/// Ψ(a, q_i) on the photon grid of `set`.
fn on_q_grid(psi: &WaveFunction, set: &ConditionalSolveSet, projector: Option<&DMatrix<f64>>) -> Result<DMatrix<C64>> {
    let nq = set.mesh.len();
    if set.mesh.axes.len() != 1 || set.vectors[0].nrows() != psi.matter_dim {
        return Err(Error::RepresentationMismatch("conditional set does not match the state's matter basis".into()));
    }
    let c = psi.as_matrix();
    match (psi.photon_basis, projector) {
        (PhotonBasis::QGrid, _) if psi.photon_dim == nq => Ok(c),
        (PhotonBasis::Fock, Some(p)) if p.nrows() == psi.photon_dim && p.ncols() == nq => Ok(c * p.map(|x| C64::new(x, 0.0))),
        _ => Err(Error::RepresentationMismatch("state cannot be mapped onto the conditional q mesh".into())),
    }
}

/// c_k(q_i) = Σ_a ψ_k(a; q_i) Ψ(a, q_i) for every surface k.
fn surface_amplitudes(psi: &WaveFunction, set: &ConditionalSolveSet, projector: Option<&DMatrix<f64>>) -> Result<DMatrix<C64>> {
    if !set.aligned {
        return Err(Error::Unaligned);
    }
    let g = on_q_grid(psi, set, projector)?;
    let mut c = DMatrix::zeros(set.n_states, set.mesh.len());
    for (i, col) in g.column_iter().enumerate() {
        for k in 0..set.n_states {
            c[(k, i)] = set.vectors[i].column(k).iter().zip(col.iter()).map(|(v, z)| z * *v).sum();
        }
    }
    Ok(c)
}

/// P_k = Σ_i |c_k(q_i)|².
pub fn surface_populations(psi: &WaveFunction, set: &ConditionalSolveSet, projector: Option<&DMatrix<f64>>) -> Result<Vec<f64>> {
    let c = surface_amplitudes(psi, set, projector)?;
    Ok(c.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect())
}

/// |⟨n|c_k⟩|² with oscillator functions from `number_projector`
/// (n_max × q), giving out[k][n].
pub fn number_resolved_populations(
    psi: &WaveFunction,
    set: &ConditionalSolveSet,
    projector: Option<&DMatrix<f64>>,
    number_projector: &DMatrix<f64>,
) -> Result<Vec<Vec<f64>>> {
    let c = surface_amplitudes(psi, set, projector)?;
    if number_projector.ncols() != set.mesh.len() {
        return Err(Error::DimensionMismatch { expected: set.mesh.len(), got: number_projector.ncols() });
    }
    let proj = c * number_projector.transpose().map(|x| C64::new(x, 0.0));
    Ok(proj.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).collect()).collect())
}

/// Probability per matter grid point, photon coordinates traced out.
/// `basis` maps matter-basis coefficients to grid amplitudes (grid ×
/// matter_dim); pass `None` when the matter index already is the grid.
pub fn electron_density(psi: &WaveFunction, basis: Option<&DMatrix<f64>>) -> Result<Vec<f64>> {
    let c = psi.as_matrix();
    let g = match basis {
        Some(v) => {
            if v.ncols() != psi.matter_dim {
                return Err(Error::DimensionMismatch { expected: psi.matter_dim, got: v.ncols() });
            }
            v.map(|x| C64::new(x, 0.0)) * c
        }
        None => c,
    };
    Ok(g.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect())
}
