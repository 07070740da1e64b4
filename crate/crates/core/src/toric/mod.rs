//! The plaquette model as an anyon theory: states, pair creation, fusion,
//! braiding, and the qubit layer built on them.

mod braid;
mod fusion;
mod gate;

pub use braid::{braid_phase, braided_faces, exchange_phase_xx, loops_braiding, LoopFaces};
pub use fusion::{fuse, FusionTable};
pub use gate::{
    controlled_phase_experiment, logical_state, one_qubit_rotation, PhaseTable, RegisterLayout,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{AnyonType, EffectiveLattice, StringPath};
use crate::pauli::PauliString;
use crate::scalar::{dot, norm, Real, C};
use crate::spectra::{LinearOperator, Operator, MAX_DENSE_SPINS};

/// Amplitudes over the effective-spin computational basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct State<T> {
    n_eff: usize,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> State<T> {
    pub fn new(n_eff: usize, amplitudes: Vec<C<T>>) -> Result<Self> {
        if n_eff > MAX_DENSE_SPINS {
            return Err(Error::TooManySpins(n_eff, MAX_DENSE_SPINS));
        }
        if amplitudes.len() != 1usize << n_eff {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes for {n_eff} spins",
                amplitudes.len()
            )));
        }
        Ok(Self { n_eff, amplitudes })
    }

    pub fn basis(n_eff: usize, index: u64) -> Result<Self> {
        if n_eff > MAX_DENSE_SPINS {
            return Err(Error::TooManySpins(n_eff, MAX_DENSE_SPINS));
        }
        let mut amplitudes = vec![C::new(T::zero(), T::zero()); 1usize << n_eff];
        *amplitudes.get_mut(index as usize).ok_or(Error::InvalidParameter(format!("basis index {index}")))? =
            C::new(T::one(), T::zero());
        Ok(Self { n_eff, amplitudes })
    }

    pub fn n_eff(&self) -> usize {
        self.n_eff
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amplitudes
    }

    pub fn norm(&self) -> T {
        norm(&self.amplitudes)
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > T::zero()) {
            return Err(Error::EmptyProjection);
        }
        self.amplitudes.iter_mut().for_each(|a| *a = *a / n);
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> C<T> {
        dot(&self.amplitudes, &other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.overlap(other).norm_sqr()
    }

    pub fn apply_pauli(&self, p: &PauliString) -> Result<Self> {
        if p.n() != self.n_eff {
            return Err(Error::SpinCountMismatch(self.n_eff, p.n()));
        }
        let mut out = vec![C::new(T::zero(), T::zero()); self.amplitudes.len()];
        for (b, a) in self.amplitudes.iter().enumerate() {
            let (to, ph) = p.apply::<T>(b as u64);
            out[to as usize] = ph * a;
        }
        Ok(Self { n_eff: self.n_eff, amplitudes: out })
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, p: &PauliString) -> Result<C<T>> {
        Ok(self.overlap(&self.apply_pauli(p)?))
    }

    /// `⟨ψ|H|ψ⟩` for a Hermitian operator.
    pub fn energy(&self, h: &Operator<T>) -> Result<T> {
        if h.n() != self.n_eff {
            return Err(Error::SpinCountMismatch(self.n_eff, h.n()));
        }
        let mut hv = vec![C::new(T::zero(), T::zero()); self.amplitudes.len()];
        h.apply(&self.amplitudes, &mut hv);
        Ok(dot(&self.amplitudes, &hv).re)
    }
}

/// The `Q_p = +1` state obtained by projecting the all-up basis state.
pub fn ground_state<T: Real>(eff: &EffectiveLattice) -> Result<State<T>> {
    let mut psi = State::basis(eff.n_eff(), 0)?;
    let half = T::of(0.5);
    for q in eff.plaquette_operators() {
        let qpsi = psi.apply_pauli(&q)?;
        for (a, b) in psi.amplitudes.iter_mut().zip(&qpsi.amplitudes) {
            *a = (*a + b) * half;
        }
    }
    if psi.norm() < T::of(1e-3) {
        return Err(Error::EmptyProjection);
    }
    psi.normalize()?;
    Ok(psi)
}

/// `⟨Q_p⟩` for every face.
pub fn plaquette_expectations<T: Real>(eff: &EffectiveLattice, state: &State<T>) -> Result<Vec<T>> {
    eff.plaquette_operators().iter().map(|q| Ok(state.expectation(q)?.re)).collect()
}

/// Face occupations `±1`, failing unless the state is a joint eigenstate.
pub fn occupations<T: Real>(eff: &EffectiveLattice, state: &State<T>) -> Result<Vec<i8>> {
    let tol = T::epsilon() * T::of(1e4);
    plaquette_expectations(eff, state)?
        .into_iter()
        .enumerate()
        .map(|(p, q)| {
            if (q - T::one()).abs() <= tol {
                Ok(1)
            } else if (q + T::one()).abs() <= tol {
                Ok(-1)
            } else {
                Err(Error::InvalidParameter(format!("<Q_{p}> = {q} is not a flux eigenvalue")))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub kind: AnyonType,
    /// Faces flipped by the creating string.
    pub faces: Vec<usize>,
    pub path: StringPath,
}

/// Face occupations together with the strings that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnyonConfiguration {
    pub occupations: Vec<i8>,
    pub particles: Vec<Particle>,
}

impl AnyonConfiguration {
    pub fn vacuum(eff: &EffectiveLattice) -> Self {
        Self { occupations: vec![1; eff.num_plaquettes()], particles: Vec::new() }
    }

    /// Adds the excitations of `path` without touching any state.
    pub fn with_string(&self, path: &StringPath) -> Result<Self> {
        let mut next = self.clone();
        for &p in path.endpoints() {
            let o = next.occupations.get_mut(p).ok_or(Error::NoSuchPlaquette(p))?;
            *o = -*o;
        }
        next.particles.push(Particle { kind: path.kind(), faces: path.endpoints().to_vec(), path: path.clone() });
        Ok(next)
    }

    /// Faces with `Q_p = -1`, ascending.
    pub fn excited(&self) -> Vec<usize> {
        self.occupations.iter().enumerate().filter(|(_, &o)| o < 0).map(|(p, _)| p).collect()
    }

    /// Product of the creating strings in creation order (latest leftmost).
    pub fn creation_operator(&self, eff: &EffectiveLattice) -> PauliString {
        self.particles
            .iter()
            .fold(PauliString::identity(eff.n_eff()).expect("n_eff <= 64"), |acc, p| {
                p.path.operator(eff).mul_unchecked(&acc)
            })
    }

    /// The occupations measured on `state` agree with the ledger.
    pub fn matches<T: Real>(&self, eff: &EffectiveLattice, state: &State<T>) -> Result<bool> {
        Ok(occupations(eff, state)? == self.occupations)
    }
}

/// Applies `path` to `state` and records the resulting anyons.
pub fn create_pair<T: Real>(
    eff: &EffectiveLattice,
    state: &State<T>,
    path: &StringPath,
) -> Result<(State<T>, AnyonConfiguration)> {
    if path.kind() == AnyonType::Vacuum {
        return Err(Error::InvalidParameter("vacuum strings create nothing".into()));
    }
    let before = occupations(eff, state)?;
    let next = state.apply_pauli(&path.operator(eff))?;
    let base = AnyonConfiguration { occupations: before, particles: Vec::new() };
    let config = base.with_string(path)?;
    debug_assert!(config.matches(eff, &next).unwrap_or(false));
    Ok((next, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{single_rotation, string_between, Endpoint};
    use crate::pauli::Axis;
    use crate::spectra::assemble_effective;

    fn eff24() -> EffectiveLattice {
        EffectiveLattice::new(2, 4).unwrap()
    }

    #[test]
    fn ground_state_is_stabilised() {
        let eff = eff24();
        let g: State<f64> = ground_state(&eff).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-12);
        for q in plaquette_expectations(&eff, &g).unwrap() {
            assert!((q - 1.0).abs() < 1e-12);
        }
        for q in eff.plaquette_operators() {
            let moved = g.apply_pauli(&q).unwrap();
            assert!((g.overlap(&moved).re - 1.0).abs() < 1e-12);
        }
        let jeff = 0.37;
        let h = assemble_effective(&eff, &vec![jeff; 8]).unwrap();
        assert!((g.energy(&h).unwrap() + 8.0 * jeff).abs() < 1e-12);
    }

    #[test]
    fn pair_energies() {
        let eff = eff24();
        let g: State<f64> = ground_state(&eff).unwrap();
        let h = assemble_effective(&eff, &vec![1.0; 8]).unwrap();
        let e0 = g.energy(&h).unwrap();
        let z = single_rotation(&eff, 3, AnyonType::Z).unwrap();
        let (s, c) = create_pair(&eff, &g, &z).unwrap();
        assert_eq!(c.excited().len(), 2);
        assert!((s.energy(&h).unwrap() - e0 - 4.0).abs() < 1e-12);
        let x = single_rotation(&eff, 3, AnyonType::X).unwrap();
        let (s, c) = create_pair(&eff, &g, &x).unwrap();
        assert_eq!(c.excited().len(), 4);
        assert!((s.energy(&h).unwrap() - e0 - 8.0).abs() < 1e-12);
        let (twice, c2) = create_pair(&eff, &create_pair(&eff, &g, &z).unwrap().0, &z).unwrap();
        assert!(c2.excited().is_empty());
        assert!((g.overlap(&twice) - C::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn string_length_does_not_change_energy() {
        let eff = EffectiveLattice::new(4, 4).unwrap();
        let g: State<f64> = ground_state(&eff).unwrap();
        let h = assemble_effective(&eff, &vec![1.0; 16]).unwrap();
        let (c, r) = eff.face_display(0);
        let b = eff.face_at(c + 4, r).unwrap();
        let short = string_between(&eff, Endpoint::Face(0), Endpoint::Face(b), AnyonType::Z).unwrap();
        // same endpoints, detour through the row above and back
        let up = string_between(&eff, Endpoint::Face(0), Endpoint::Face(eff.face_at(c, r + 2).unwrap()), AnyonType::Y)
            .unwrap();
        let across = string_between(
            &eff,
            Endpoint::Face(eff.face_at(c, r + 2).unwrap()),
            Endpoint::Face(eff.face_at(c + 4, r + 2).unwrap()),
            AnyonType::Z,
        )
        .unwrap();
        let down = string_between(&eff, Endpoint::Face(eff.face_at(c + 4, r + 2).unwrap()), Endpoint::Face(b), AnyonType::Y)
            .unwrap();
        let long = up.compose(&eff, &across).compose(&eff, &down);
        assert_eq!(short.endpoints(), long.endpoints());
        assert!(long.len() > short.len());
        let e1 = create_pair(&eff, &g, &short).unwrap().0.energy(&h).unwrap();
        let e2 = create_pair(&eff, &g, &long).unwrap().0.energy(&h).unwrap();
        assert!((e1 - e2).abs() < 1e-12);
    }

    #[test]
    fn intermediate_fluxes_rejected() {
        let eff = eff24();
        let g: State<f64> = ground_state(&eff).unwrap();
        let mixed = State::new(
            8,
            g.amplitudes().iter().zip(g.apply_pauli(&PauliString::single(8, 0, Axis::Z).unwrap()).unwrap().amplitudes())
                .map(|(a, b)| (a + b) / 2f64.sqrt())
                .collect(),
        )
        .unwrap();
        assert!(occupations(&eff, &mixed).is_err());
    }

    #[test]
    fn single_precision_ground_state() {
        let eff = eff24();
        let g: State<f32> = ground_state(&eff).unwrap();
        assert!(occupations(&eff, &g).unwrap().iter().all(|&o| o == 1));
    }
}
