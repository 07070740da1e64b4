//! String operators on the effective lattice.
//!
//! Anyons live on faces. A horizontal face move is a `σ̃^z` on the spin
//! between the two faces, a vertical move a `σ̃^y`. A fermion is a pair of
//! faces moved together; wherever its two face paths use the same spin the
//! `σ̃^y σ̃^z` product is written as `iσ̃^x`.

use serde::{Deserialize, Serialize};

use super::effective::EffectiveLattice;
use crate::error::{Error, Result};
use crate::pauli::{Axis, PauliString};

/// Particle types of the abelian phase, with the vacuum.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AnyonType {
    Vacuum,
    X,
    Y,
    Z,
}

impl AnyonType {
    pub const ALL: [AnyonType; 4] = [AnyonType::Vacuum, AnyonType::X, AnyonType::Y, AnyonType::Z];

    pub fn label(self) -> &'static str {
        match self {
            AnyonType::Vacuum => "1",
            AnyonType::X => "X",
            AnyonType::Y => "Y",
            AnyonType::Z => "Z",
        }
    }

    /// Single-spin rotation that creates a pair of this type.
    pub fn axis(self) -> Option<Axis> {
        match self {
            AnyonType::Vacuum => None,
            AnyonType::X => Some(Axis::X),
            AnyonType::Y => Some(Axis::Y),
            AnyonType::Z => Some(Axis::Z),
        }
    }
}

/// One end of a string: a single face for `Y`/`Z`, a face pair for `X`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Endpoint {
    Face(usize),
    Fermion(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringPath {
    kind: AnyonType,
    steps: Vec<(usize, Axis)>,
    endpoints: Vec<usize>,
}

/// Per-spin parity of `σ̃^z` and `σ̃^y` moves, in first-touch order.
#[derive(Default)]
struct MoveSet {
    order: Vec<usize>,
    z: Vec<bool>,
    y: Vec<bool>,
}

impl MoveSet {
    fn new(n: usize) -> Self {
        Self { order: Vec::new(), z: vec![false; n], y: vec![false; n] }
    }

    fn touch(&mut self, spin: usize, axis: Axis) {
        if !self.order.contains(&spin) {
            self.order.push(spin);
        }
        match axis {
            Axis::Z => self.z[spin] ^= true,
            Axis::Y => self.y[spin] ^= true,
            Axis::X => {
                self.z[spin] ^= true;
                self.y[spin] ^= true;
            }
        }
    }

    fn steps(&self) -> Vec<(usize, Axis)> {
        self.order
            .iter()
            .filter_map(|&s| match (self.z[s], self.y[s]) {
                (true, true) => Some((s, Axis::X)),
                (true, false) => Some((s, Axis::Z)),
                (false, true) => Some((s, Axis::Y)),
                (false, false) => None,
            })
            .collect()
    }
}

/// Smallest `(horizontal, vertical)` move counts taking face `from` to `to`.
fn route(eff: &EffectiveLattice, from: usize, to: usize, allow_h: bool, allow_v: bool) -> Option<(i64, i64)> {
    let reach = (eff.nx() * eff.ny()) as i64;
    let mut best: Option<((i64, bool, bool, i64), (i64, i64))> = None;
    let hs = if allow_h { -reach..=reach } else { 0..=0 };
    for kh in hs {
        let vs = if allow_v { -reach..=reach } else { 0..=0 };
        for kv in vs {
            if eff.shift_face(from, kh + kv, kv - kh) != to {
                continue;
            }
            let key = (kh.abs() + kv.abs(), kh < 0, kv < 0, kh.abs());
            if best.map_or(true, |(b, _)| key < b) {
                best = Some((key, (kh, kv)));
            }
        }
    }
    best.map(|(_, m)| m)
}

fn walk(eff: &EffectiveLattice, moves: &mut MoveSet, mut face: usize, kh: i64, kv: i64) -> usize {
    for _ in 0..kh.abs() {
        let (next, spin) = eff.step_horizontal(face, kh > 0);
        moves.touch(spin, Axis::Z);
        face = next;
    }
    for _ in 0..kv.abs() {
        let (next, spin) = eff.step_vertical(face, kv > 0);
        moves.touch(spin, Axis::Y);
        face = next;
    }
    face
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn check_face(eff: &EffectiveLattice, p: usize) -> Result<()> {
    if p >= eff.num_plaquettes() {
        return Err(Error::NoSuchPlaquette(p));
    }
    Ok(())
}

impl StringPath {
    fn from_moves(eff: &EffectiveLattice, kind: AnyonType, moves: &MoveSet) -> Self {
        let mut path = Self { kind, steps: moves.steps(), endpoints: Vec::new() };
        path.endpoints = eff.excited_by(&path.operator(eff));
        path
    }

    pub fn kind(&self) -> AnyonType {
        self.kind
    }

    pub fn steps(&self) -> &[(usize, Axis)] {
        &self.steps
    }

    /// Faces excited when the string acts on the vacuum.
    pub fn endpoints(&self) -> &[usize] {
        &self.endpoints
    }

    pub fn is_closed(&self) -> bool {
        self.endpoints.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Product of `σ̃^z`, `σ̃^y` and `iσ̃^x` over the steps.
    pub fn operator(&self, eff: &EffectiveLattice) -> PauliString {
        self.steps.iter().fold(PauliString::identity(eff.n_eff()).expect("n_eff <= 64"), |acc, &(s, a)| {
            acc.mul_unchecked(&eff.spin_operator(s, a).expect("spin in range"))
        })
    }

    /// Concatenation of two transports, keeping `self`'s kind.
    pub fn compose(&self, eff: &EffectiveLattice, next: &StringPath) -> StringPath {
        let mut moves = MoveSet::new(eff.n_eff());
        for &(s, a) in self.steps.iter().chain(&next.steps) {
            moves.touch(s, a);
        }
        Self::from_moves(eff, self.kind, &moves)
    }
}

/// Deterministic string creating `kind` anyons at `from` and `to`.
///
/// `Z` strings move along rows with `σ̃^z`, `Y` strings along columns with
/// `σ̃^y`. `X` strings route both faces of the fermion, each along its row
/// first and then its column; ties prefer the increasing direction.
pub fn string_between(eff: &EffectiveLattice, from: Endpoint, to: Endpoint, kind: AnyonType) -> Result<StringPath> {
    let mut moves = MoveSet::new(eff.n_eff());
    let expected = match (kind, from, to) {
        (AnyonType::Y | AnyonType::Z, Endpoint::Face(a), Endpoint::Face(b)) => {
            check_face(eff, a)?;
            check_face(eff, b)?;
            if a == b {
                return Err(Error::Unreachable("anyon pair needs two distinct faces".into()));
            }
            let horizontal = kind == AnyonType::Z;
            let (kh, kv) = route(eff, a, b, horizontal, !horizontal).ok_or_else(|| {
                Error::Unreachable(format!("face {b} is not on the {} line of face {a}", if horizontal { "row" } else { "column" }))
            })?;
            walk(eff, &mut moves, a, kh, kv);
            sorted(vec![a, b])
        }
        (AnyonType::X, Endpoint::Fermion(a0, a1), Endpoint::Fermion(b0, b1)) => {
            for p in [a0, a1, b0, b1] {
                check_face(eff, p)?;
            }
            if a0 == a1 || b0 == b1 {
                return Err(Error::Unreachable("a fermion occupies two distinct faces".into()));
            }
            let pairing = |(s0, t0): (usize, usize), (s1, t1): (usize, usize)| {
                let r0 = route(eff, s0, t0, true, true)?;
                let r1 = route(eff, s1, t1, true, true)?;
                Some((r0.0.abs() + r0.1.abs() + r1.0.abs() + r1.1.abs(), [(s0, r0), (s1, r1)]))
            };
            let options = [pairing((a0, b0), (a1, b1)), pairing((a0, b1), (a1, b0))];
            let (_, legs) = options
                .into_iter()
                .flatten()
                .min_by_key(|(cost, _)| *cost)
                .ok_or_else(|| Error::Unreachable("fermion faces cannot be routed".into()))?;
            for (start, (kh, kv)) in legs {
                walk(eff, &mut moves, start, kh, kv);
            }
            let mut ends: Vec<usize> = [a0, a1, b0, b1].into_iter().collect();
            ends.sort_unstable();
            let mut sym = Vec::new();
            for p in ends.iter() {
                if ends.iter().filter(|&&q| q == *p).count() % 2 == 1 && !sym.contains(p) {
                    sym.push(*p);
                }
            }
            if sym.is_empty() {
                return Err(Error::Unreachable("fermion endpoints coincide".into()));
            }
            sym
        }
        _ => {
            return Err(Error::InvalidParameter(format!("endpoints {from:?}/{to:?} do not fit kind {kind:?}")));
        }
    };
    let path = StringPath::from_moves(eff, kind, &moves);
    if path.endpoints != expected {
        return Err(Error::Unreachable(format!("routed string excites {:?}, expected {:?}", path.endpoints, expected)));
    }
    Ok(path)
}

/// Single-spin pair creation, `σ̃^a_j` (`iσ̃^x_j` for `X`).
pub fn single_rotation(eff: &EffectiveLattice, spin: usize, kind: AnyonType) -> Result<StringPath> {
    let axis = kind.axis().ok_or_else(|| Error::InvalidParameter("vacuum has no creation string".into()))?;
    if spin >= eff.n_eff() {
        return Err(Error::SiteOutOfRange { site: spin, n: eff.n_eff() });
    }
    let mut moves = MoveSet::new(eff.n_eff());
    moves.touch(spin, axis);
    Ok(StringPath::from_moves(eff, kind, &moves))
}

/// Closed path of one face around a `w x h` rectangle (in face moves),
/// counter-clockwise from its lower-left corner `face`.
pub fn face_loop(eff: &EffectiveLattice, face: usize, w: i64, h: i64, kind: AnyonType) -> Result<StringPath> {
    check_face(eff, face)?;
    let mut moves = MoveSet::new(eff.n_eff());
    let mut f = walk(eff, &mut moves, face, w, 0);
    f = walk(eff, &mut moves, f, 0, h);
    f = walk(eff, &mut moves, f, -w, 0);
    f = walk(eff, &mut moves, f, 0, -h);
    debug_assert_eq!(f, face);
    let path = StringPath::from_moves(eff, kind, &moves);
    if !path.is_closed() {
        return Err(Error::OpenLoop(path.endpoints.len()));
    }
    Ok(path)
}

/// Closed fermion transport: both faces of `(a, b)` go around the rectangle.
pub fn fermion_loop(eff: &EffectiveLattice, a: usize, b: usize, w: i64, h: i64) -> Result<StringPath> {
    let la = face_loop(eff, a, w, h, AnyonType::X)?;
    let lb = face_loop(eff, b, w, h, AnyonType::X)?;
    let path = la.compose(eff, &lb);
    if !path.is_closed() {
        return Err(Error::OpenLoop(path.endpoints.len()));
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eff44() -> EffectiveLattice {
        EffectiveLattice::new(4, 4).unwrap()
    }

    #[test]
    fn adjacent_z_pair_is_single_rotation() {
        let eff = eff44();
        let j = 5;
        let f = eff.faces_of(j);
        let path = string_between(&eff, Endpoint::Face(f.left), Endpoint::Face(f.right), AnyonType::Z).unwrap();
        assert_eq!(path.steps(), &[(j, Axis::Z)]);
    }

    #[test]
    fn coincident_endpoints_rejected() {
        let eff = eff44();
        assert!(matches!(
            string_between(&eff, Endpoint::Face(3), Endpoint::Face(3), AnyonType::Z),
            Err(Error::Unreachable(_))
        ));
    }

    #[test]
    fn y_string_two_rows_apart() {
        let eff = EffectiveLattice::new(6, 6).unwrap();
        let p = 0;
        let (c, r) = eff.face_display(p);
        let q = eff.face_at(c, r + 4).unwrap();
        let path = string_between(&eff, Endpoint::Face(p), Endpoint::Face(q), AnyonType::Y).unwrap();
        assert_eq!(path.len(), 2);
        assert!(path.steps().iter().all(|&(_, a)| a == Axis::Y));
        assert_eq!(path.endpoints(), &sorted(vec![p, q])[..]);
    }

    #[test]
    fn z_string_off_row_is_unreachable() {
        let eff = EffectiveLattice::new(6, 6).unwrap();
        let (c, r) = eff.face_display(0);
        let q = eff.face_at(c, r + 2).unwrap();
        assert!(string_between(&eff, Endpoint::Face(0), Endpoint::Face(q), AnyonType::Z).is_err());
    }

    #[test]
    fn fermion_string_interleaves_axes() {
        let eff = EffectiveLattice::new(6, 6).unwrap();
        let (c, r) = eff.face_display(7);
        let a = (eff.face_at(c, r).unwrap(), eff.face_at(c + 1, r + 1).unwrap());
        let b = (eff.face_at(c + 4, r).unwrap(), eff.face_at(c + 5, r + 1).unwrap());
        let path = string_between(&eff, Endpoint::Fermion(a.0, a.1), Endpoint::Fermion(b.0, b.1), AnyonType::X).unwrap();
        assert_eq!(path.endpoints().len(), 4);
        assert!(path.steps().iter().any(|&(_, ax)| ax == Axis::X) || path.len() >= 2);
    }

    #[test]
    fn loops_are_closed() {
        let eff = EffectiveLattice::new(6, 6).unwrap();
        for (w, h) in [(1, 1), (2, 1), (1, 3), (-2, 2)] {
            assert!(face_loop(&eff, 4, w, h, AnyonType::Y).unwrap().is_closed());
            let (c, r) = eff.face_display(4);
            let b = eff.face_at(c + 1, r + 1).unwrap();
            assert!(fermion_loop(&eff, 4, b, w, h).unwrap().is_closed());
        }
    }

    #[test]
    fn routing_is_deterministic() {
        let eff = EffectiveLattice::new(4, 6).unwrap();
        for a in 0..eff.num_plaquettes() {
            for b in 0..eff.num_plaquettes() {
                let p1 = string_between(&eff, Endpoint::Face(a), Endpoint::Face(b), AnyonType::Z);
                let p2 = string_between(&eff, Endpoint::Face(a), Endpoint::Face(b), AnyonType::Z);
                assert_eq!(p1, p2);
            }
        }
    }
}
