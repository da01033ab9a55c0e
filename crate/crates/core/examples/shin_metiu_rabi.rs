//! Gap opening and Rabi splitting of the cavity Shin-Metiu molecule for the
//! two softening lengths.

use cavity_bo::io::workflow::{linspace, rabi_splitting};
use cavity_bo::io::{ScenarioConfig, System};
use cavity_bo::quantity::units::{mev, unit_scale, Dimension};

fn main() -> cavity_bo::Result<()> {
    let unit = unit_scale(Dimension::Coupling, "meV^(1/2)/nm")?;
    for preset in ["shin-metiu-1.5", "shin-metiu-1.75"] {
        let cfg = ScenarioConfig::preset(preset)?.resolve()?;
        let sys = System::build(&cfg)?;
        let omega = sys.photon().omega;
        println!("{preset}: ħω = {:.2} meV", mev(omega));
        for l in linspace(0.0, cfg.run.sweep_to, 4) {
            let (_, s) = sys.exact(l, 6)?;
            let gap = sys.electronic_gap(l)?;
            println!(
                "  λ = {:6.2}  gap {:8.2} meV  Ω_R = {:6.2}%  E₁..E₆ − E₁ = {:?}",
                l / unit,
                mev(gap),
                100.0 * rabi_splitting(&s.values, omega).unwrap_or(f64::NAN),
                s.values.iter().map(|e| (mev(e - s.values[0]) * 100.0).round() / 100.0).collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}
