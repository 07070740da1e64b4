use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AnyonConfiguration;
use crate::error::{Error, Result};
use crate::lattice::{face_loop, fermion_loop, AnyonType, EffectiveLattice, StringPath};

/// `+1` or `-1`: the commutation phase of a closed loop with the strings
/// that created `target`.
pub fn braid_phase(eff: &EffectiveLattice, closed: &StringPath, target: &AnyonConfiguration) -> Result<i8> {
    if !closed.is_closed() {
        return Err(Error::OpenLoop(closed.endpoints().len()));
    }
    closed.operator(eff).commutation_phase(&target.creation_operator(eff))
}

/// Phase picked up when two fermions trade places through a T-junction.
///
/// Each leg is an `X` string from a common junction fermion to its own end.
/// With fermions at the ends of legs 0 and 1, the particle on leg 0 moves to
/// leg 2, the one on leg 1 to leg 0, then the first from leg 2 to leg 1.
/// The product of the three moves is a scalar, which is returned.
pub fn exchange_phase_xx(eff: &EffectiveLattice, legs: &[StringPath; 3]) -> Result<i8> {
    if legs.iter().any(|l| l.kind() != AnyonType::X) {
        return Err(Error::InvalidExchange("every leg must be an X string".into()));
    }
    let junction: Vec<usize> = legs[0]
        .endpoints()
        .iter()
        .copied()
        .filter(|p| legs[1..].iter().all(|l| l.endpoints().contains(p)))
        .collect();
    if junction.len() != 2 {
        return Err(Error::InvalidExchange(format!("legs share {} faces, expected a fermion", junction.len())));
    }
    let ends: Vec<Vec<usize>> = legs
        .iter()
        .map(|l| l.endpoints().iter().copied().filter(|p| !junction.contains(p)).collect())
        .collect();
    for (i, e) in ends.iter().enumerate() {
        if e.len() != 2 {
            return Err(Error::InvalidExchange(format!("leg {i} does not end on a fermion")));
        }
        if ends[..i].iter().any(|f| f.iter().any(|p| e.contains(p))) {
            return Err(Error::InvalidExchange(format!("leg {i} ends where another leg ends")));
        }
    }
    let s: Vec<_> = legs.iter().map(|l| l.operator(eff)).collect();
    let hop = |from: usize, to: usize| s[to].mul_unchecked(&s[from].adjoint());
    let u = hop(2, 1).mul_unchecked(&hop(1, 0)).mul_unchecked(&hop(0, 2));
    if !u.is_scalar() {
        return Err(Error::InvalidExchange("moves do not return the fermions to the same faces".into()));
    }
    match u.phase_exp() {
        0 => Ok(1),
        2 => Ok(-1),
        k => Err(Error::InvalidExchange(format!("exchange scalar i^{k} is not real"))),
    }
}

/// Geometry of a rectangular loop: corner faces (one per moving face) and
/// the extent in face moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopFaces {
    pub corners: Vec<usize>,
    pub w: i64,
    pub h: i64,
}

impl LoopFaces {
    pub fn path(&self, eff: &EffectiveLattice, kind: AnyonType) -> Result<StringPath> {
        match (kind, self.corners.as_slice()) {
            (AnyonType::X, &[a, b]) => fermion_loop(eff, a, b, self.w, self.h),
            (AnyonType::Y | AnyonType::Z, &[a]) => face_loop(eff, a, self.w, self.h, kind),
            _ => Err(Error::InvalidParameter(format!("{} corners for a {kind:?} loop", self.corners.len()))),
        }
    }
}

fn inside(eff: &EffectiveLattice, corner: usize, w: i64, h: i64, q: usize) -> Result<bool> {
    let (c0, r0) = eff.face_display(corner);
    let (qc, qr) = eff.face_display(q);
    let (clo, chi) = (c0.min(c0 + 2 * w), c0.max(c0 + 2 * w));
    let (rlo, rhi) = (r0.min(r0 + 2 * h), r0.max(r0 + 2 * h));
    let (nx, ny) = (eff.nx() as i64, eff.ny() as i64);
    let mut hits = 0;
    for k1 in -2..=2 {
        for k2 in -2..=2 {
            let (c, r) = (qc + k1 * nx - k2 * ny, qr + k1 * nx + k2 * ny);
            if clo < c && c < chi && rlo < r && r < rhi {
                hits += 1;
            }
        }
    }
    if hits > 1 {
        return Err(Error::InvalidParameter("loop wraps the torus".into()));
    }
    Ok(hits == 1)
}

/// Members of `faces` braided by the loop: enclosed an odd number of times
/// by a moving face of the other checkerboard class.
pub fn braided_faces(eff: &EffectiveLattice, geometry: &LoopFaces, faces: &[usize]) -> Result<Vec<usize>> {
    let class = |p: usize| {
        eff.face_class(p).ok_or_else(|| Error::InvalidParameter("braiding needs even torus dimensions".into()))
    };
    let mut out = Vec::new();
    for &q in faces {
        let mut odd = false;
        for &a in &geometry.corners {
            if class(a)? != class(q)? && inside(eff, a, geometry.w, geometry.h, q)? {
                odd = !odd;
            }
        }
        if odd {
            out.push(q);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Random rectangular fermion loops whose braided subset of `excited` is
/// exactly `wanted`. Deterministic for a given seed.
pub fn loops_braiding(
    eff: &EffectiveLattice,
    excited: &[usize],
    wanted: &[usize],
    count: usize,
    seed: u64,
) -> Result<Vec<(LoopFaces, StringPath)>> {
    let mut want = wanted.to_vec();
    want.sort_unstable();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_side = (eff.nx().min(eff.ny()) as i64 / 2).max(1);
    let mut out: Vec<(LoopFaces, StringPath)> = Vec::new();
    for _ in 0..20_000 {
        if out.len() == count {
            break;
        }
        let a = rng.gen_range(0..eff.num_plaquettes());
        let (c, r) = eff.face_display(a);
        let b = eff.face_at(c + 1, r + 1).expect("diagonal neighbour is a face");
        let geometry = LoopFaces { corners: vec![a, b], w: rng.gen_range(1..=max_side), h: rng.gen_range(1..=max_side) };
        if out.iter().any(|(g, _)| *g == geometry) {
            continue;
        }
        let Ok(braided) = braided_faces(eff, &geometry, excited) else { continue };
        if braided == want {
            let path = geometry.path(eff, AnyonType::X)?;
            out.push((geometry, path));
        }
    }
    if out.len() < count {
        return Err(Error::Unreachable(format!("found {} of {count} loops braiding {want:?}", out.len())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{single_rotation, string_between, Endpoint};

    fn eff66() -> EffectiveLattice {
        EffectiveLattice::new(6, 6).unwrap()
    }

    fn z_pair(eff: &EffectiveLattice) -> (AnyonConfiguration, usize, usize) {
        let (c, r) = eff.face_display(14);
        let b = eff.face_at(c + 4, r).unwrap();
        let s = string_between(eff, Endpoint::Face(14), Endpoint::Face(b), AnyonType::Z).unwrap();
        (AnyonConfiguration::vacuum(eff).with_string(&s).unwrap(), 14, b)
    }

    #[test]
    fn fermion_around_one_endpoint() {
        let eff = eff66();
        let (cfg, a, b) = z_pair(&eff);
        for wanted in [vec![a], vec![b], vec![a, b], vec![]] {
            let loops = loops_braiding(&eff, &[a, b], &wanted, 10, 3).unwrap();
            for (_, l) in loops {
                let expect = if wanted.len() == 1 { -1 } else { 1 };
                assert_eq!(braid_phase(&eff, &l, &cfg).unwrap(), expect, "{wanted:?}");
            }
        }
    }

    #[test]
    fn open_loop_rejected() {
        let eff = eff66();
        let open = single_rotation(&eff, 0, AnyonType::X).unwrap();
        assert_eq!(braid_phase(&eff, &open, &AnyonConfiguration::vacuum(&eff)), Err(Error::OpenLoop(4)));
    }

    fn t_junction(eff: &EffectiveLattice, up_first: bool) -> [StringPath; 3] {
        let j = 14;
        let (c, r) = eff.face_display(j);
        let f = |dc: i64, dr: i64| {
            let a = eff.face_at(c + dc, r + dr).unwrap();
            let b = eff.face_at(c + dc + 1, r + dr + 1).unwrap();
            Endpoint::Fermion(a, b)
        };
        let x = |from: Endpoint, to: Endpoint| string_between(eff, from, to, AnyonType::X).unwrap();
        let right = x(f(0, 0), f(4, 0));
        let left = x(f(0, 0), f(-4, 0));
        let up = if up_first {
            x(f(0, 0), f(0, 4))
        } else {
            // detour: right, up, back left
            x(f(0, 0), f(2, 0)).compose(eff, &x(f(2, 0), f(2, 4))).compose(eff, &x(f(2, 4), f(0, 4)))
        };
        [right, up, left]
    }

    #[test]
    fn fermions_exchange_with_minus_sign() {
        let eff = eff66();
        for deformed in [false, true] {
            let legs = t_junction(&eff, !deformed);
            let phase = exchange_phase_xx(&eff, &legs).unwrap();
            assert_eq!(phase, -1);
            assert_eq!(phase * phase, 1);
        }
    }

    #[test]
    fn bad_junction_rejected() {
        let eff = eff66();
        let mut legs = t_junction(&eff, true);
        legs[2] = legs[0].clone();
        assert!(matches!(exchange_phase_xx(&eff, &legs), Err(Error::InvalidExchange(_))));
    }
}
