//! Trapping wells and adiabatic transport of a single anyon.
//!
//! A trap lowers the plaquette coupling at one face. To let the anyon move
//! at all, each hop of the schedule carries a weak tunnelling term `-h σ̃`
//! on the spin between its two faces; without it every `Q_p` would be
//! conserved. The trap depth is ramped linearly from the old face to the
//! new one and the state is advanced with fourth-order commutator-free Magnus steps,
//! each exponential applied in a small Krylov space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::EffectiveLattice;
use crate::pauli::{Axis, PauliString};
use crate::scalar::{axpy, dot, norm, Real, C};
use crate::spectra::dense::{hermitian_eigen, to_dense};
use crate::spectra::tridiag::tridiagonal_eigen;
use crate::spectra::{assemble_effective, LinearOperator, Operator};
use crate::toric::State;

/// Largest effective lattice for which transport diagonalises densely.
pub const MAX_TRANSPORT_SPINS: usize = 10;

/// `J_eff' = jx² jy² / (4 (jz + jz')² jz')`: the plaquette coupling when one
/// of its z-links is strengthened to `jz'`.
pub fn trapped_coupling<T: Real>(jx: T, jy: T, jz: T, jz_prime: T) -> Result<T> {
    if !(jz > T::zero()) || !(jz_prime > T::zero()) {
        return Err(Error::InvalidParameter("jz and jz' must be positive".into()));
    }
    let s = jz + jz_prime;
    Ok(jx * jx * jy * jy / (T::of(4.0) * s * s * jz_prime))
}

/// `base` with the coupling at `p` lowered by `depth`.
pub fn trap_well<T: Real>(eff: &EffectiveLattice, base: &[T], p: usize, depth: T) -> Result<Vec<T>> {
    if base.len() != eff.num_plaquettes() {
        return Err(Error::CouplingCount { expected: eff.num_plaquettes(), got: base.len() });
    }
    let b = *base.get(p).ok_or(Error::NoSuchPlaquette(p))?;
    if depth < T::zero() || depth > b {
        return Err(Error::InvalidParameter(format!("well depth {depth} outside [0, {b}]")));
    }
    let mut out = base.to_vec();
    out[p] = b - depth;
    Ok(out)
}

/// `t² (1/U_aa - 1/(2 U_ab))`: the Ising coupling generated by tunnelling.
pub fn hubbard_ising_coupling<T: Real>(t_a: T, u_aa: T, u_ab: T) -> Result<T> {
    if !(u_aa > T::zero()) || !(u_ab > T::zero()) {
        return Err(Error::InvalidParameter("interaction energies must be positive".into()));
    }
    Ok(t_a * t_a * (T::one() / u_aa - T::one() / (T::of(2.0) * u_ab)))
}

/// A trap moved along adjacent faces while the partner anyon stays put.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule<T> {
    pub waypoints: Vec<usize>,
    /// Face of the other anyon of the pair.
    pub partner: usize,
    /// Uniform plaquette coupling away from the trap.
    pub j_eff: T,
    pub depth: T,
    /// Tunnelling amplitude on each hop's spin.
    pub hopping: T,
    /// Ramp time per hop.
    pub ramp_time: T,
    /// Initial step count per hop; doubled until the fidelity settles.
    pub steps: usize,
}

impl<T: Real> Schedule<T> {
    /// Spin and axis connecting consecutive waypoints.
    pub fn hops(&self, eff: &EffectiveLattice) -> Result<Vec<(usize, Axis)>> {
        let mut out = Vec::new();
        for w in self.waypoints.windows(2) {
            let (a, b) = (w[0], w[1]);
            // on narrow tori a pair can be adjacent both ways; rows win
            let found = [true, false]
                .into_iter()
                .map(|fwd| (eff.step_horizontal(a, fwd), Axis::Z))
                .chain([true, false].into_iter().map(|fwd| (eff.step_vertical(a, fwd), Axis::Y)))
                .find(|((next, _), _)| *next == b)
                .map(|((_, spin), axis)| (spin, axis));
            out.push(found.ok_or_else(|| Error::InvalidSchedule(format!("faces {a} and {b} are not adjacent")))?);
        }
        Ok(out)
    }

    pub fn validate(&self, eff: &EffectiveLattice) -> Result<()> {
        if self.waypoints.is_empty() {
            return Err(Error::InvalidSchedule("no waypoints".into()));
        }
        if let Some(&p) = self.waypoints.iter().chain([&self.partner]).find(|&&p| p >= eff.num_plaquettes()) {
            return Err(Error::NoSuchPlaquette(p));
        }
        if !(self.depth > T::zero()) || self.depth > self.j_eff {
            return Err(Error::InvalidSchedule(format!("depth {} outside (0, J_eff]", self.depth)));
        }
        if !(self.ramp_time > T::zero()) || self.steps == 0 {
            return Err(Error::InvalidSchedule("ramp time and step count must be positive".into()));
        }
        if !(self.hopping >= T::zero()) {
            return Err(Error::InvalidSchedule("negative hopping".into()));
        }
        if eff.n_eff() > MAX_TRANSPORT_SPINS {
            return Err(Error::TooManySpins(eff.n_eff(), MAX_TRANSPORT_SPINS));
        }
        if self.waypoints.contains(&self.partner) {
            return Err(Error::InvalidSchedule("trap passes over the partner".into()));
        }
        for (spin, axis) in self.hops(eff)? {
            let flips = eff.excited_by(&eff.spin_operator(spin, axis)?);
            if flips.contains(&self.partner) {
                return Err(Error::InvalidSchedule("a hop moves the partner".into()));
            }
        }
        Ok(())
    }

    /// Hamiltonian during hop `k` at ramp fraction `s` in `[0, 1]`.
    pub fn hamiltonian(&self, eff: &EffectiveLattice, k: usize, s: T) -> Result<Operator<T>> {
        let mut j = vec![self.j_eff; eff.num_plaquettes()];
        let last = self.waypoints.len() - 1;
        let (from, to) = (self.waypoints[k.min(last)], self.waypoints[(k + 1).min(last)]);
        j[from] = j[from] - self.depth * (T::one() - s);
        j[to] = j[to] - self.depth * s;
        if from == to {
            j[from] = self.j_eff - self.depth;
        }
        let mut h = assemble_effective(eff, &j)?;
        if self.hopping > T::zero() {
            for (spin, axis) in self.hops(eff)? {
                h.push(-self.hopping, PauliString::single(eff.n_eff(), spin, axis)?)?;
            }
        }
        Ok(h)
    }

    /// Orthonormal basis of the lowest eigenspace of `h` with the partner
    /// face excited.
    fn trapped_space(&self, eff: &EffectiveLattice, h: &Operator<T>) -> Result<Vec<Vec<C<T>>>> {
        let mut hp = h.clone();
        let penalty = T::of(4.0) * h.norm_bound() + T::one();
        let half = penalty * T::of(0.5);
        let q = eff.plaquette_operator(self.partner)?;
        hp.push(half, PauliString::identity(eff.n_eff())?)?;
        hp.push(half, q)?;
        let (vals, vecs) = hermitian_eigen(&to_dense(&hp))?;
        let scale = vals.iter().fold(T::one(), |m, v| m.max(v.abs()));
        let tol = T::of(1e-9) * scale;
        Ok(vals.iter().zip(vecs).take_while(|(v, _)| **v - vals[0] <= tol).map(|(_, v)| v).collect())
    }

    /// Basis of the trapped eigenspace with the trap resting at waypoint `k`.
    pub fn trapped_states(&self, eff: &EffectiveLattice, k: usize) -> Result<Vec<State<T>>> {
        self.validate(eff)?;
        if k >= self.waypoints.len() {
            return Err(Error::InvalidSchedule(format!("waypoint {k} of {}", self.waypoints.len())));
        }
        let (hop, s) = if k == 0 { (0, T::zero()) } else { (k - 1, T::one()) };
        let h = self.hamiltonian(eff, hop, s)?;
        self.trapped_space(eff, &h)?.into_iter().map(|v| State::new(eff.n_eff(), v)).collect()
    }
}

fn projection<T: Real>(space: &[Vec<C<T>>], psi: &[C<T>]) -> T {
    space.iter().map(|v| dot(v, psi).norm_sqr()).sum()
}

/// `exp(-i dt H) v` by a Lanczos expansion grown until the tail estimate
/// drops below `tol`.
fn expm_krylov<T: Real>(h: &Operator<T>, v: &[C<T>], dt: T, tol: T) -> Result<Vec<C<T>>> {
    const MAX_M: usize = 60;
    let n = v.len();
    let beta0 = norm(v);
    if beta0 == T::zero() {
        return Ok(v.to_vec());
    }
    let mut basis: Vec<Vec<C<T>>> = vec![v.iter().map(|x| *x / beta0).collect()];
    let (mut alpha, mut beta) = (Vec::new(), Vec::<T>::new());
    let mut w = vec![C::new(T::zero(), T::zero()); n];
    loop {
        let j = basis.len() - 1;
        h.apply(&basis[j], &mut w);
        alpha.push(dot(&basis[j], &w).re);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let b = norm(&w);
        let m = alpha.len();
        let (vals, s) = tridiagonal_eigen(&alpha, &beta, true)?;
        // coefficients of exp(-i dt T) e1 in the Krylov basis
        let coef: Vec<C<T>> = (0..m)
            .map(|i| {
                (0..m).fold(C::new(T::zero(), T::zero()), |acc, k| {
                    let ph = C::new((vals[k] * dt).cos(), -(vals[k] * dt).sin());
                    acc + ph * (s[i][k] * s[0][k])
                })
            })
            .collect();
        let tail = b * coef[m - 1].norm();
        if b <= T::epsilon() * T::of(100.0) || tail <= tol || m >= MAX_M.min(n) {
            if tail > tol && b > T::epsilon() * T::of(100.0) {
                return Err(Error::NoConvergence { iterations: m, residual: tail.to_f64_lossy() });
            }
            let mut out = vec![C::new(T::zero(), T::zero()); n];
            for (c, q) in coef.iter().zip(&basis) {
                axpy(*c * beta0, q, &mut out);
            }
            return Ok(out);
        }
        beta.push(b);
        basis.push(w.iter().map(|x| *x / b).collect());
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportRow {
    pub hop: usize,
    pub time: f64,
    /// Weight of the state in the instantaneous trapped eigenspace.
    pub overlap: f64,
    pub norm_drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportResult<T> {
    pub state: State<T>,
    /// Weight in the trapped eigenspace at the final waypoint.
    pub fidelity: T,
    /// Steps per hop after refinement.
    pub steps: usize,
    pub norm_drift: T,
    /// `⟨Q_p⟩` of the final state.
    pub fluxes: Vec<T>,
    pub rows: Vec<TransportRow>,
}

const SAMPLES_PER_HOP: usize = 10;
// weighted sample times of the two exponentials, first applied first:
// (a2 t1 + a1 t2) / (a1 + a2) and (a1 t1 + a2 t2) / (a1 + a2) with
// a1,2 = (3 -/+ 2 sqrt 3) / 12 and t1,2 = 1/2 -/+ sqrt 3 / 6
const CFM4_NODES: [f64; 2] = [1.0 / 6.0, 5.0 / 6.0];
const MAX_STEPS: usize = 1 << 16;

fn evolve<T: Real>(
    eff: &EffectiveLattice,
    initial: &State<T>,
    sched: &Schedule<T>,
    steps: usize,
    record: bool,
) -> Result<(Vec<C<T>>, T, Vec<TransportRow>)> {
    let mut psi = initial.amplitudes().to_vec();
    let n0 = norm(&psi);
    let mut drift = T::zero();
    let mut rows = Vec::new();
    let dt = sched.ramp_time / T::of(steps as f64);
    let tol = T::epsilon() * T::of(1e3);
    let sample = |hop: usize, s: T, psi: &[C<T>], drift: T, rows: &mut Vec<TransportRow>| -> Result<()> {
        let h = sched.hamiltonian(eff, hop, s)?;
        let space = sched.trapped_space(eff, &h)?;
        rows.push(TransportRow {
            hop,
            time: ((T::of(hop as f64) + s) * sched.ramp_time).to_f64_lossy(),
            overlap: projection(&space, psi).to_f64_lossy(),
            norm_drift: drift.to_f64_lossy(),
        });
        Ok(())
    };
    for hop in 0..sched.waypoints.len() - 1 {
        let every = (steps / SAMPLES_PER_HOP).max(1);
        if record && hop == 0 {
            sample(hop, T::zero(), &psi, drift, &mut rows)?;
        }
        for k in 0..steps {
            // fourth-order commutator-free Magnus step; H is affine in time,
            // so each weighted pair of samples is H at a single shifted time
            for node in CFM4_NODES {
                let s = (T::of(k as f64) + T::of(node)) / T::of(steps as f64);
                let h = sched.hamiltonian(eff, hop, s)?;
                psi = expm_krylov(&h, &psi, dt * T::of(0.5), tol)?;
            }
            drift = drift.max((norm(&psi) - n0).abs());
            if record && ((k + 1) % every == 0 || k + 1 == steps) {
                sample(hop, T::of((k + 1) as f64) / T::of(steps as f64), &psi, drift, &mut rows)?;
            }
        }
    }
    Ok((psi, drift, rows))
}

/// Moves the trapped anyon along the schedule, doubling the step count until
/// the final fidelity changes by less than `1e-6`.
pub fn adiabatic_transport<T: Real>(
    eff: &EffectiveLattice,
    initial: &State<T>,
    sched: &Schedule<T>,
) -> Result<TransportResult<T>> {
    sched.validate(eff)?;
    if initial.n_eff() != eff.n_eff() {
        return Err(Error::SpinCountMismatch(eff.n_eff(), initial.n_eff()));
    }
    let last = sched.waypoints.len() - 1;
    let target = sched.trapped_states(eff, last)?;
    let space: Vec<Vec<C<T>>> = target.into_iter().map(|s| s.into_amplitudes()).collect();
    let mut steps = sched.steps;
    let mut previous: Option<T> = None;
    let (psi, drift) = loop {
        let (psi, drift, _) = evolve(eff, initial, sched, steps, false)?;
        let f = projection(&space, &psi);
        let settled = previous.map_or(last == 0, |p| (f - p).abs() < T::of(1e-6));
        if settled {
            break (psi, drift);
        }
        if steps * 2 > MAX_STEPS {
            return Err(Error::NoConvergence { iterations: steps, residual: previous.map_or(f64::NAN, |p| (f - p).abs().to_f64_lossy()) });
        }
        previous = Some(f);
        steps *= 2;
    };
    let (_, _, rows) = if last > 0 { evolve(eff, initial, sched, steps, true)? } else { (Vec::new(), T::zero(), Vec::new()) };
    let fidelity = projection(&space, &psi);
    let state = State::new(eff.n_eff(), psi)?;
    let fluxes = crate::toric::plaquette_expectations(eff, &state)?;
    Ok(TransportResult { state, fidelity, steps, norm_drift: drift, fluxes, rows })
}

/// Fidelity of an instantaneous switch: the weight of the first waypoint's
/// trapped state in the last one's trapped eigenspace.
pub fn sudden_fidelity<T: Real>(eff: &EffectiveLattice, sched: &Schedule<T>) -> Result<T> {
    let start = sched.trapped_states(eff, 0)?;
    let end = sched.trapped_states(eff, sched.waypoints.len() - 1)?;
    let space: Vec<Vec<C<T>>> = end.into_iter().map(|s| s.into_amplitudes()).collect();
    Ok(projection(&space, start[0].amplitudes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::dense::hermitian_eigenvalues;

    #[test]
    fn trap_formula() {
        let (jx, jy, jz) = (0.3f64, 0.4, 1.1);
        let jeff = jx * jx * jy * jy / (16.0 * jz * jz * jz);
        assert!((trapped_coupling(jx, jy, jz, jz).unwrap() - jeff).abs() < 1e-18);
        let r = trapped_coupling(jx, jy, jz, 3.0 * jz).unwrap();
        assert!((r * 12.0 - jeff).abs() < 1e-17);
        assert_eq!(trapped_coupling(1.0, 1.0, 1.0, 3.0).unwrap(), 1.0 / 192.0);
        assert!(trapped_coupling(1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn hubbard_values() {
        assert_eq!(hubbard_ising_coupling(0.0, 1.0, 1.0).unwrap(), 0.0);
        assert!((hubbard_ising_coupling(0.1f64, 1.0, 1.0).unwrap() - 0.005).abs() < 1e-15);
        assert!((hubbard_ising_coupling(0.1f64, 2.0, 1e12).unwrap() - 0.005).abs() < 1e-12);
        assert!(hubbard_ising_coupling(0.1, 0.0, 1.0).is_err());
    }

    #[test]
    fn well_lowers_excitation_by_two_depths() {
        let eff = EffectiveLattice::new(2, 4).unwrap();
        let base = vec![1.0; 8];
        assert_eq!(trap_well(&eff, &base, 3, 0.0).unwrap(), base);
        assert!(trap_well(&eff, &base, 3, 1.5).is_err());
        let trapped = trap_well(&eff, &base, 3, 0.25).unwrap();
        let e = |j: &[f64]| {
            let h = assemble_effective(&eff, j).unwrap();
            let mut levels = hermitian_eigenvalues(&to_dense(&h)).unwrap();
            levels.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            levels[1] - levels[0]
        };
        assert!((e(&base) - e(&trapped) - 0.5).abs() < 1e-12);
    }

    fn one_hop(t: f64) -> (EffectiveLattice, Schedule<f64>) {
        let eff = EffectiveLattice::new(2, 4).unwrap();
        let (nxt, _) = eff.step_horizontal(0, true);
        let (partner, _) = eff.step_horizontal(0, false);
        let sched = Schedule { waypoints: vec![0, nxt], partner, j_eff: 1.0, depth: 0.5, hopping: 0.1, ramp_time: t, steps: 16 };
        (eff, sched)
    }

    #[test]
    fn zero_hops_is_identity() {
        let (eff, mut sched) = one_hop(1.0);
        sched.waypoints.truncate(1);
        let init = sched.trapped_states(&eff, 0).unwrap().remove(0);
        let r = adiabatic_transport(&eff, &init, &sched).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slow_ramp_follows_the_trap() {
        let mut last = 0.0;
        for t in [2.0, 20.0, 200.0] {
            let (eff, sched) = one_hop(t);
            let init = sched.trapped_states(&eff, 0).unwrap().remove(0);
            let r = adiabatic_transport(&eff, &init, &sched).unwrap();
            assert!(r.norm_drift < 1e-9);
            assert!(r.fidelity >= last - 1e-9, "{t}: {} < {last}", r.fidelity);
            last = r.fidelity;
            if t == 200.0 {
                assert!(r.fidelity >= 0.99);
                assert!(r.fluxes[sched.waypoints[1]] < -0.9);
                assert!(r.fluxes[sched.partner] < -0.999);
            }
        }
        let (eff, sched) = one_hop(1e-9);
        let sudden = sudden_fidelity(&eff, &sched).unwrap();
        assert!(sudden < 1.0);
        let init = sched.trapped_states(&eff, 0).unwrap().remove(0);
        let r = adiabatic_transport(&eff, &init, &sched).unwrap();
        assert!((r.fidelity - sudden).abs() < 1e-6);
    }
}
