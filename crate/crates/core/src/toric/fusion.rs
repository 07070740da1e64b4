use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{AnyonType, EffectiveLattice};
use crate::pauli::{Axis, PauliString};

/// Types as elements of `Z2 x Z2`: `Y = 01`, `Z = 10`, `X = 11`.
fn code(a: AnyonType) -> u8 {
    match a {
        AnyonType::Vacuum => 0,
        AnyonType::Y => 1,
        AnyonType::Z => 2,
        AnyonType::X => 3,
    }
}

fn from_code(c: u8) -> AnyonType {
    match c & 3 {
        0 => AnyonType::Vacuum,
        1 => AnyonType::Y,
        2 => AnyonType::Z,
        _ => AnyonType::X,
    }
}

pub fn fuse(a: AnyonType, b: AnyonType) -> AnyonType {
    from_code(code(a) ^ code(b))
}

/// `entries[a][b] = a x b`, indexed in [`AnyonType::ALL`] order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionTable {
    pub entries: [[AnyonType; 4]; 4],
}

fn index(a: AnyonType) -> usize {
    AnyonType::ALL.iter().position(|&t| t == a).expect("listed")
}

fn axis_type(p: &PauliString, spin: usize) -> AnyonType {
    match p.axis_at(spin) {
        None => AnyonType::Vacuum,
        Some(Axis::X) => AnyonType::X,
        Some(Axis::Y) => AnyonType::Y,
        Some(Axis::Z) => AnyonType::Z,
    }
}

impl FusionTable {
    pub fn standard() -> Self {
        let mut entries = [[AnyonType::Vacuum; 4]; 4];
        for a in AnyonType::ALL {
            for b in AnyonType::ALL {
                entries[index(a)][index(b)] = fuse(a, b);
            }
        }
        Self { entries }
    }

    /// Table read off from products of the single-spin creation operators
    /// on `spin`: the product's axis names the fused type.
    pub fn from_operators(eff: &EffectiveLattice, spin: usize) -> Result<Self> {
        let op = |t: AnyonType| -> Result<PauliString> {
            match t.axis() {
                None => PauliString::identity(eff.n_eff()),
                Some(ax) => eff.spin_operator(spin, ax),
            }
        };
        let mut entries = [[AnyonType::Vacuum; 4]; 4];
        for a in AnyonType::ALL {
            for b in AnyonType::ALL {
                entries[index(a)][index(b)] = axis_type(&op(a)?.multiply(&op(b)?)?, spin);
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, a: AnyonType, b: AnyonType) -> AnyonType {
        self.entries[index(a)][index(b)]
    }

    /// Commutative, with the vacuum as identity and every type its own inverse.
    pub fn is_abelian_z2z2(&self) -> bool {
        AnyonType::ALL.iter().all(|&a| {
            self.get(AnyonType::Vacuum, a) == a
                && self.get(a, a) == AnyonType::Vacuum
                && AnyonType::ALL.iter().all(|&b| self.get(a, b) == self.get(b, a))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AnyonType::*;

    #[test]
    fn listed_products() {
        assert_eq!(fuse(Y, Z), X);
        assert_eq!(fuse(Vacuum, X), X);
        assert_eq!(fuse(X, X), Vacuum);
        assert_eq!(fuse(X, Y), Z);
        assert_eq!(fuse(Z, X), Y);
    }

    #[test]
    fn operators_reproduce_table() {
        let eff = EffectiveLattice::new(2, 4).unwrap();
        for spin in 0..eff.n_eff() {
            let t = FusionTable::from_operators(&eff, spin).unwrap();
            assert_eq!(t, FusionTable::standard());
        }
        assert!(FusionTable::standard().is_abelian_z2z2());
    }
}
