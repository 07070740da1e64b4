//! Dual-route checks: Lanczos against dense diagonalisation on every small
//! cluster, and the Pauli algebra against explicit matrices.

use honeycomb_anyons::spectra::{
    assemble_effective, assemble_honeycomb, dense, lowest_eigenvalues, LanczosOptions, LinearOperator, Operator,
};
use honeycomb_anyons::{Complex64, CouplingConfig, EffectiveLattice, HoneycombLattice, PauliString};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::output::Check;

pub const MAX_ORACLE_SPINS: usize = 10;
const LANCZOS_LEVELS: usize = 24;

#[derive(Clone, Debug, Serialize)]
pub struct OracleCase {
    pub lattice: String,
    pub spins: usize,
    pub levels: usize,
    pub max_difference: f64,
}

/// Every honeycomb torus (twisted ones included) and every effective torus
/// with at most [`MAX_ORACLE_SPINS`] spins.
pub fn small_clusters(seed: u64) -> Vec<(String, Operator<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for cells in 1..=MAX_ORACLE_SPINS / 2 {
        for nx in 1..=cells {
            if cells % nx != 0 {
                continue;
            }
            let ny = cells / nx;
            for twist in 0..nx {
                let Ok(lat) = HoneycombLattice::twisted(nx, ny, twist) else { continue };
                let c = CouplingConfig::new(rng.gen_range(0.1..1.0), rng.gen_range(0.1..1.0), 1.0);
                if let Ok(h) = assemble_honeycomb(&lat, &c) {
                    out.push((format!("honeycomb {nx}x{ny} twist {twist}"), h));
                }
            }
        }
    }
    for nx in 1..=MAX_ORACLE_SPINS {
        for ny in 1..=MAX_ORACLE_SPINS / nx {
            let Ok(eff) = EffectiveLattice::new(nx, ny) else { continue };
            if eff.n_eff() > MAX_ORACLE_SPINS {
                continue;
            }
            let j: Vec<f64> = (0..eff.num_plaquettes()).map(|_| rng.gen_range(0.2..1.0)).collect();
            if let Ok(h) = assemble_effective(&eff, &j) {
                out.push((format!("effective {nx}x{ny}"), h));
            }
        }
    }
    out
}

pub fn lanczos_cases(seed: u64) -> Result<Vec<OracleCase>> {
    let opts = LanczosOptions { seed, ..Default::default() };
    small_clusters(seed)
        .into_iter()
        .map(|(name, h)| {
            let exact = dense::hermitian_eigenvalues(&dense::to_dense(&h))?;
            let k = LANCZOS_LEVELS.min(h.dim());
            let s = lowest_eigenvalues(&h, k, &opts)?;
            let max_difference = s.eigenvalues.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            Ok(OracleCase { lattice: name, spins: h.n(), levels: k, max_difference })
        })
        .collect()
}

fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn adjoint(a: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

/// Exhaustive over all strings with phase `1` (products) and random
/// phases, for `n <= 4`. Returns the number of comparisons and the failures.
pub fn pauli_dense_mismatches(seed: u64) -> Result<(usize, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=4usize {
        let all: Vec<PauliString> = (0..1u64 << n)
            .flat_map(|x| (0..1u64 << n).map(move |z| (x, z)))
            .map(|(x, z)| PauliString::from_masks(n, x, z, 0))
            .collect::<std::result::Result<_, _>>()?;
        let mats: Vec<Vec<Vec<Complex64>>> = all.iter().map(|p| p.to_dense()).collect();
        for p in &all {
            let p = p.with_phase(rng.gen_range(0..4));
            let mp: Vec<Vec<Complex64>> = p.to_dense();
            if adjoint(&mp) != p.adjoint().to_dense::<f64>() {
                bad.push(format!("adjoint {p}"));
            }
            for basis in 0..1u64 << n {
                let (out, amp) = p.apply::<f64>(basis);
                let col: Vec<Complex64> = (0..1usize << n).map(|r| mp[r][basis as usize]).collect();
                let nonzero: Vec<usize> = (0..col.len()).filter(|&r| col[r] != Complex64::new(0.0, 0.0)).collect();
                if nonzero != [out as usize] || col[out as usize] != amp {
                    bad.push(format!("apply {p} to {basis}"));
                }
            }
            for (j, q) in all.iter().enumerate() {
                let pq = p.multiply(q)?;
                let dense_pq = matmul(&mp, &mats[j]);
                if pq.to_dense::<f64>() != dense_pq {
                    bad.push(format!("{p} * {q}"));
                }
                let qp = matmul(&mats[j], &mp);
                let sign = p.commutation_phase(q)?;
                let expect: Vec<Vec<Complex64>> =
                    qp.iter().map(|row| row.iter().map(|z| z * f64::from(sign)).collect()).collect();
                if dense_pq != expect {
                    bad.push(format!("commutation {p}, {q}"));
                }
                checked += 1;
            }
        }
    }
    Ok((checked, bad))
}

pub fn run_oracles(seed: u64) -> Result<(Vec<OracleCase>, Vec<Check>)> {
    let cases = lanczos_cases(seed)?;
    let worst = cases.iter().map(|c| c.max_difference).fold(0.0, f64::max);
    let names: Vec<&str> = cases.iter().map(|c| c.lattice.as_str()).collect();
    let mut checks = vec![Check::new(
        "oracle_lanczos_vs_dense",
        worst <= 1e-10 && !cases.is_empty(),
        format!("{} clusters up to {MAX_ORACLE_SPINS} spins ({}), largest difference {worst:.1e}", cases.len(), names.join(", ")),
    )];
    let (count, bad) = pauli_dense_mismatches(seed)?;
    checks.push(Check::new(
        "oracle_pauli_vs_dense",
        bad.is_empty(),
        format!("{count} products on 1 to 4 spins compared exactly, {} mismatches {:?}", bad.len(), &bad[..bad.len().min(3)]),
    ));
    Ok((cases, checks))
}
