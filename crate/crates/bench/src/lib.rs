//! Fixtures shared by the benchmarks: the four lifted systems with their linearizable
//! potentials and evaluation grids.

use eisenhart_core::lifts::build_lift_for;
use eisenhart_core::{LiftKind, LiftedSystem, PotentialSpec};

pub struct Fixture {
    pub system: LiftedSystem,
    pub x0: f64,
    pub v0: f64,
    pub x_range: (f64, f64),
}

impl Fixture {
    pub fn name(&self) -> String {
        self.system.kind().to_string()
    }

    /// `n` grid points spread over `x_range` with the extended coordinates at zero.
    pub fn grid(&self, n: usize) -> Vec<Vec<f64>> {
        let (lo, hi) = self.x_range;
        self.system
            .domain()
            .sample(lo, hi, n)
            .into_iter()
            .map(|x| {
                let mut p = vec![0.0; self.system.dim()];
                p[0] = x;
                p
            })
            .collect()
    }
}

pub fn fixtures() -> Vec<Fixture> {
    let cases = [
        (LiftKind::Riemannian11, PotentialSpec::ermakov(0.5).unwrap(), 2.0, 1.0, 0.0, (0.3, 5.0)),
        (LiftKind::Lorentzian12, PotentialSpec::oscillator(1.0), 1.0, 1.0, 0.0, (-3.0, 3.0)),
        (LiftKind::Mixed13, PotentialSpec::ermakov_oscillator(1.0, 0.5).unwrap(), 1.0, 1.0, 0.3, (0.5, 3.0)),
        (LiftKind::ConformalMixed13, PotentialSpec::morse(1.0, 1.0, 1.0).unwrap(), -1.0, 0.0, 0.0, (-2.0, 2.0)),
    ];
    cases
        .into_iter()
        .map(|(kind, pot, alpha, x0, v0, x_range)| Fixture {
            system: build_lift_for(kind, &pot, alpha, x0, v0).expect("fixture lift"),
            x0,
            v0,
            x_range,
        })
        .collect()
}
