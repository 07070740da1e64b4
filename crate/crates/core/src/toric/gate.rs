use serde::{Deserialize, Serialize};

use super::{braid_phase, braided_faces, ground_state, AnyonConfiguration, LoopFaces, State};
use crate::error::{Error, Result};
use crate::lattice::{single_rotation, AnyonType, EffectiveLattice};
use crate::scalar::{Real, C};

/// Ground state with a pair of `kind` created on `spin` (`|X⟩`, `|Y⟩`,
/// `|Z⟩`; the vacuum gives `|0⟩`).
pub fn logical_state<T: Real>(eff: &EffectiveLattice, spin: usize, kind: AnyonType) -> Result<State<T>> {
    let g = ground_state(eff)?;
    if kind == AnyonType::Vacuum {
        return Ok(g);
    }
    g.apply_pauli(&single_rotation(eff, spin, kind)?.operator(eff))
}

/// `exp(-iθ σ̃^z_j)`, applied as `cos θ - i sin θ σ̃^z_j`.
pub fn one_qubit_rotation<T: Real>(state: &State<T>, eff_spin: usize, theta: T) -> Result<State<T>> {
    let n = state.n_eff();
    if eff_spin >= n {
        return Err(Error::SiteOutOfRange { site: eff_spin, n });
    }
    let (c, s) = (theta.cos(), theta.sin());
    let plus = C::new(c, -s);
    let minus = C::new(c, s);
    let amps = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, a)| if (b >> eff_spin) & 1 == 0 { a * plus } else { a * minus })
        .collect();
    State::new(n, amps)
}

/// Two qubits, each a pair created on one spin. The control's particle is
/// carried once around the target's right and upper faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub control_spin: usize,
    pub target_spin: usize,
}

impl RegisterLayout {
    /// Control four rows above the target, in the same row parity.
    pub fn standard(eff: &EffectiveLattice) -> Result<Self> {
        let target_spin = eff.n_eff() / 2 + 1;
        let (c, r) = eff.spin_display(target_spin);
        let control_spin = eff.spin_at(c, r + 4).expect("odd display parity is a spin");
        let layout = Self { control_spin, target_spin };
        layout.validate(eff)?;
        Ok(layout)
    }

    /// Loop of `kind` that braids the target's right and upper faces but
    /// neither of the other two.
    pub fn loop_for(&self, eff: &EffectiveLattice, kind: AnyonType) -> Result<LoopFaces> {
        let (c, r) = eff.spin_display(self.target_spin);
        let left = eff.face_at(c - 1, r).expect("face");
        let below = eff.face_at(c, r - 1).expect("face");
        let (_, cr) = eff.spin_display(self.control_spin);
        // class of the control's moving face, by display row parity
        let row_of = |t: AnyonType| match t {
            AnyonType::Z => cr,
            _ => cr + 1,
        };
        let corners = match kind {
            AnyonType::Vacuum => return Err(Error::InvalidParameter("the vacuum does not move".into())),
            AnyonType::X => vec![left, below],
            _ if (row_of(kind) - r).rem_euclid(2) == 0 => vec![left],
            _ => vec![below],
        };
        Ok(LoopFaces { corners, w: 1, h: 1 })
    }

    fn validate(&self, eff: &EffectiveLattice) -> Result<()> {
        for s in [self.control_spin, self.target_spin] {
            if s >= eff.n_eff() {
                return Err(Error::SiteOutOfRange { site: s, n: eff.n_eff() });
            }
        }
        if self.control_spin == self.target_spin {
            return Err(Error::InvalidLayout("control and target share a spin".into()));
        }
        let control_faces = single_rotation(eff, self.control_spin, AnyonType::X)?.endpoints().to_vec();
        let target_faces = single_rotation(eff, self.target_spin, AnyonType::X)?.endpoints().to_vec();
        if control_faces.iter().any(|p| target_faces.contains(p)) {
            return Err(Error::InvalidLayout("control and target pairs touch".into()));
        }
        for kind in [AnyonType::X, AnyonType::Y, AnyonType::Z] {
            let geometry = self.loop_for(eff, kind)?;
            if !braided_faces(eff, &geometry, &control_faces)?.is_empty() {
                return Err(Error::InvalidLayout(format!("{kind:?} loop winds around the control pair")));
            }
        }
        Ok(())
    }
}

/// Phases of the control loop on every joint basis state, rows indexed by
/// the control type and columns by the target type, both in
/// [`AnyonType::ALL`] order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub layout: RegisterLayout,
    pub types: [AnyonType; 4],
    pub phases: [[i8; 4]; 4],
    /// The same phases measured on state vectors, when the lattice is small
    /// enough to hold one.
    pub state_phases: Option<[[f64; 4]; 4]>,
}

impl PhaseTable {
    pub fn get(&self, control: AnyonType, target: AnyonType) -> i8 {
        let i = |t| AnyonType::ALL.iter().position(|&a| a == t).expect("listed");
        self.phases[i(control)][i(target)]
    }
}

const STATE_CHECK_SPINS: usize = 16;

pub fn controlled_phase_experiment(eff: &EffectiveLattice, layout: &RegisterLayout) -> Result<PhaseTable> {
    layout.validate(eff)?;
    let mut phases = [[1i8; 4]; 4];
    let with_states = eff.n_eff() <= STATE_CHECK_SPINS;
    let mut state_phases = [[1.0f64; 4]; 4];
    let ground: Option<State<f64>> = if with_states { Some(ground_state(eff)?) } else { None };
    for (ci, &control) in AnyonType::ALL.iter().enumerate() {
        if control == AnyonType::Vacuum {
            continue;
        }
        let path = layout.loop_for(eff, control)?.path(eff, control)?;
        for (ti, &target) in AnyonType::ALL.iter().enumerate() {
            let mut cfg = AnyonConfiguration::vacuum(eff);
            cfg = cfg.with_string(&single_rotation(eff, layout.control_spin, control)?)?;
            if target != AnyonType::Vacuum {
                cfg = cfg.with_string(&single_rotation(eff, layout.target_spin, target)?)?;
            }
            phases[ci][ti] = braid_phase(eff, &path, &cfg)?;
            if let Some(g) = &ground {
                let psi = g.apply_pauli(&cfg.creation_operator(eff))?;
                let op = path.operator(eff);
                let moved = psi.apply_pauli(&op)?;
                let vacuum_phase = g.overlap(&g.apply_pauli(&op)?);
                let ratio = psi.overlap(&moved) / vacuum_phase;
                if ratio.im.abs() > 1e-10 {
                    return Err(Error::InvalidLayout(format!("complex loop phase {ratio}")));
                }
                state_phases[ci][ti] = ratio.re;
            }
        }
    }
    Ok(PhaseTable {
        layout: layout.clone(),
        types: AnyonType::ALL,
        phases,
        state_phases: with_states.then_some(state_phases),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rotation_maps_x_to_y() {
        let eff = EffectiveLattice::new(2, 4).unwrap();
        let j = 3;
        let x: State<f64> = logical_state(&eff, j, AnyonType::X).unwrap();
        let y: State<f64> = logical_state(&eff, j, AnyonType::Y).unwrap();
        let same = one_qubit_rotation(&x, j, 0.0).unwrap();
        assert!((x.overlap(&same).re - 1.0).abs() < 1e-14);
        let half = one_qubit_rotation(&x, j, PI / 2.0).unwrap();
        assert!((y.fidelity(&half) - 1.0).abs() < 1e-12);
        let quarter = one_qubit_rotation(&x, j, PI / 4.0).unwrap();
        assert!((x.fidelity(&quarter) - 0.5).abs() < 1e-12);
        assert!((y.fidelity(&quarter) - 0.5).abs() < 1e-12);
        assert!((quarter.norm() - 1.0).abs() < 1e-12);
        assert!(one_qubit_rotation(&x, 8, 0.1).is_err());
    }

    #[test]
    fn gate_table() {
        let eff = EffectiveLattice::new(4, 4).unwrap();
        let layout = RegisterLayout::standard(&eff).unwrap();
        let t = controlled_phase_experiment(&eff, &layout).unwrap();
        use AnyonType::*;
        assert_eq!(t.get(X, Y), -1);
        assert_eq!(t.get(X, X), 1);
        for a in AnyonType::ALL {
            assert_eq!(t.get(Vacuum, a), 1);
            assert_eq!(t.get(a, Vacuum), 1);
        }
        let sp = t.state_phases.unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((sp[i][j] - t.phases[i][j] as f64).abs() < 1e-10);
            }
        }
    }
}
