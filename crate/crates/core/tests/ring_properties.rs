//! Symmetry and sum-rule properties of the exact ring ground state.

use cavity_bo::dynamics::{electron_density, WaveFunction};
use cavity_bo::io::workflow::Model;
use cavity_bo::io::{ScenarioConfig, System};
use cavity_bo::model::PhotonBasis;
use cavity_bo::quantity::units::{unit_scale, Dimension};
use cavity_bo::C64;

fn ground_density(sys: &System, lambda: f64) -> (Vec<f64>, f64) {
    let Model::Ring(r) = &sys.model else { unreachable!() };
    let (asm, s) = sys.exact(lambda, 2).unwrap();
    let amps: Vec<C64> = s.vector(0).iter().map(|x| C64::new(*x, 0.0)).collect();
    let psi = WaveFunction::new(amps, asm.matter.dim, asm.photon_dim, PhotonBasis::Fock).unwrap();
    // ⟨q⟩ from the Fock ladder: q_{n,n+1} = √((n+1)/2ω)
    let c = psi.as_matrix();
    let w = asm.mode.frequency;
    let mut q = 0.0;
    for a in 0..c.nrows() {
        for n in 0..c.ncols() - 1 {
            q += 2.0 * ((n + 1) as f64 / (2.0 * w)).sqrt() * (c[(a, n)] * c[(a, n + 1)]).re;
        }
    }
    // in oscillator lengths
    (electron_density(&psi, Some(&r.basis.vectors)).unwrap(), q * w.sqrt())
}

#[test]
fn ground_state_symmetries_and_density_shift() {
    let cfg = ScenarioConfig::preset("ring").unwrap().resolve().unwrap();
    let sys = System::build(&cfg).unwrap();
    let Model::Ring(r) = &sys.model else { unreachable!() };
    let unit = unit_scale(Dimension::Coupling, "meV^(1/2)/nm").unwrap();
    let (n0, q0) = ground_density(&sys, 0.0);
    let inv = r.ring.inversion_map();
    let e = std::f64::consts::FRAC_1_SQRT_2;
    let mut anisotropy = Vec::new();
    for lam in [0.0302, 0.1342] {
        let (n, q) = ground_density(&sys, lam * unit);
        // the opposite-parity partner sits 0.02 meV above at strong coupling,
        // so solver residuals leave a small admixture
        assert!(q.abs() < 1e-6, "⟨q⟩ = {q}");
        assert!((n.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let parity = n.iter().enumerate().map(|(k, v)| (v - n[inv[k]]).abs()).fold(0.0, f64::max);
        assert!(parity < 1e-8, "density not inversion symmetric: {parity}");
        let dn: Vec<f64> = n.iter().zip(&n0).map(|(a, b)| a - b).collect();
        assert!(dn.iter().sum::<f64>().abs() < 1e-10);
        // ⟨(e·r)² − (e⊥·r)²⟩ of the shift: > 0 along the polarization
        let a: f64 = dn
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let (x, y) = r.ring.grid.point(k);
                let (along, across) = (e * (x + y), e * (y - x));
                d * (along * along - across * across)
            })
            .sum();
        anisotropy.push(a);
    }
    assert!(q0.abs() < 1e-12);
    assert!(anisotropy[1] > 0.0, "strong coupling moves density along the polarization");
    assert!(anisotropy[0] < 0.0, "below the double-well onset the shift lies across the polarization");
}
