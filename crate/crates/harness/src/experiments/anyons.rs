//! Plaquette-model energies, fusion, braiding, exchange and gate checks.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use honeycomb_anyons::lattice::{face_loop, single_rotation, string_between};
use honeycomb_anyons::spectra::{
    assemble_effective, dense, ground_multiplet, lowest_eigenvalues, LanczosOptions,
};
use honeycomb_anyons::toric::{
    braid_phase, controlled_phase_experiment, exchange_phase_xx, ground_state, logical_state, loops_braiding,
    one_qubit_rotation, AnyonConfiguration, FusionTable, LoopFaces, RegisterLayout,
};
use honeycomb_anyons::{AnyonType, EffectiveLattice, Endpoint, StateVector, StringPath};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{write_json, Check};

/// A check together with the raw numbers behind it.
#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub check: Check,
    pub data: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnyonReport {
    pub items: Vec<Item>,
    /// Reported only, not asserted.
    pub same_type_loops: Value,
}

impl AnyonReport {
    pub fn checks(&self) -> Vec<Check> {
        self.items.iter().map(|i| i.check.clone()).collect()
    }

    pub fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> Result<Vec<PathBuf>> {
        Ok(vec![write_json(
            dir,
            "anyons.json",
            &json!({ "experiment": "anyons", "config": cfg, "items": self.items, "same_type_loops": self.same_type_loops }),
        )?])
    }
}

fn item(name: &str, passed: bool, detail: impl Into<String>, data: Value) -> Item {
    Item { check: Check::new(name, passed, detail), data }
}

fn lattice(nx: usize, ny: usize) -> Result<EffectiveLattice> {
    Ok(EffectiveLattice::new(nx, ny)?)
}

/// Ground energy, vortex gap and fermion cost of the uniform plaquette model.
pub fn effective_model_items(eff: &EffectiveLattice, j: f64) -> Result<Vec<Item>> {
    const TOL: f64 = 1e-10;
    let np = eff.num_plaquettes();
    let h = assemble_effective(eff, &vec![j; np])?;
    let levels: Vec<f64> = dense::hermitian_eigenvalues(&dense::to_dense(&h))?;
    let m = ground_multiplet(&levels, 1e-3)?;
    let lanczos = lowest_eigenvalues(&h, m.size + 1, &LanczosOptions::default())?;
    let lanczos_gap = lanczos.eigenvalues[m.size] - lanczos.eigenvalues[m.size - 1];
    let e0 = levels[0];
    let mut out = vec![item(
        "effective_ground_energy",
        (e0 + np as f64 * j).abs() <= TOL,
        format!("E0 = {e0} (expected {}), multiplet of {}", -(np as f64) * j, m.size),
        json!({ "ground_energy": e0, "multiplet": m.size }),
    )];
    out.push(item(
        "effective_gap",
        (m.gap - 4.0 * j).abs() <= TOL && (lanczos_gap - 4.0 * j).abs() <= TOL,
        format!("gap {} dense, {} Lanczos (expected {})", m.gap, lanczos_gap, 4.0 * j),
        json!({ "dense": m.gap, "lanczos": lanczos_gap }),
    ));
    let g: StateVector = ground_state(eff)?;
    let spin = eff.n_eff() / 2;
    let mut costs = serde_json::Map::new();
    let mut ok = true;
    for (kind, want) in [(AnyonType::X, 8.0), (AnyonType::Y, 4.0), (AnyonType::Z, 4.0)] {
        let psi = g.apply_pauli(&single_rotation(eff, spin, kind)?.operator(eff))?;
        let cost = psi.energy(&h)? - e0;
        ok &= (cost - want * j).abs() <= TOL;
        costs.insert(kind.label().into(), json!(cost));
    }
    out.push(item(
        "effective_excitation_costs",
        ok,
        format!("costs on spin {spin}: {} (expected X 8, Y 4, Z 4 times {j})", Value::Object(costs.clone())),
        Value::Object(costs),
    ));
    Ok(out)
}

fn expected_fusion(a: AnyonType, b: AnyonType) -> AnyonType {
    use AnyonType::*;
    match (a, b) {
        (Vacuum, t) | (t, Vacuum) => t,
        (X, X) | (Y, Y) | (Z, Z) => Vacuum,
        (X, Y) | (Y, X) => Z,
        (Y, Z) | (Z, Y) => X,
        (Z, X) | (X, Z) => Y,
    }
}

fn fusion_item(eff: &EffectiveLattice) -> Result<Item> {
    let standard = FusionTable::standard();
    let mut mismatches = Vec::new();
    for a in AnyonType::ALL {
        for b in AnyonType::ALL {
            if standard.get(a, b) != expected_fusion(a, b) {
                mismatches.push(format!("{}x{}", a.label(), b.label()));
            }
        }
    }
    let mut operator_mismatch = Vec::new();
    for spin in 0..eff.n_eff() {
        if FusionTable::from_operators(eff, spin)? != standard {
            operator_mismatch.push(spin);
        }
    }
    let table: Vec<Vec<&str>> =
        AnyonType::ALL.iter().map(|&a| AnyonType::ALL.iter().map(|&b| standard.get(a, b).label()).collect()).collect();
    Ok(item(
        "fusion_table",
        mismatches.is_empty() && operator_mismatch.is_empty() && standard.is_abelian_z2z2(),
        format!("16 entries, {} differ from the rules; operator tables differ on spins {:?}", mismatches.len(), operator_mismatch),
        json!({ "order": ["1", "X", "Y", "Z"], "table": table }),
    ))
}

fn pair(eff: &EffectiveLattice, kind: AnyonType) -> Result<(AnyonConfiguration, usize, usize)> {
    let a = eff.num_plaquettes() / 2 + eff.nx() / 2;
    let (c, r) = eff.face_display(a);
    let b = match kind {
        AnyonType::Z => eff.face_at(c + 4, r),
        _ => eff.face_at(c, r + 4),
    }
    .expect("display lattice is periodic");
    let s = string_between(eff, Endpoint::Face(a), Endpoint::Face(b), kind)?;
    Ok((AnyonConfiguration::vacuum(eff).with_string(&s)?, a, b))
}

/// X loops around one endpoint, both, or none of a `Y` or `Z` pair; every
/// set is sampled with `count` deformed loops.
fn braiding_items(eff: &EffectiveLattice, count: usize, seed: u64) -> Result<Vec<Item>> {
    let mut out = Vec::new();
    let mut deformation_ok = true;
    let mut deformation_data = serde_json::Map::new();
    for kind in [AnyonType::Y, AnyonType::Z] {
        let (cfg, a, b) = pair(eff, kind)?;
        for (label, wanted, expect) in
            [("one_endpoint", vec![a], -1i8), ("other_endpoint", vec![b], -1), ("both_endpoints", vec![a, b], 1), ("none", vec![], 1)]
        {
            let loops = loops_braiding(eff, &[a, b], &wanted, count, seed ^ ((a as u64) << 8))?;
            let phases: Vec<i8> = loops.iter().map(|(_, l)| braid_phase(eff, l, &cfg)).collect::<std::result::Result<_, _>>()?;
            let geoms: Vec<&LoopFaces> = loops.iter().map(|(g, _)| g).collect();
            let all_same = phases.iter().all(|p| *p == phases[0]);
            deformation_ok &= all_same && loops.len() >= count;
            deformation_data.insert(format!("{}_{label}", kind.label()), json!({ "phases": phases, "loops": geoms }));
            out.push(item(
                &format!("braid_x_around_{}_{label}", kind.label().to_lowercase()),
                phases.iter().all(|p| *p == expect),
                format!("{} loops, phases {:?} (expected {expect})", phases.len(), dedup(&phases)),
                json!({ "pair": [a, b], "phases": phases }),
            ));
        }
    }
    let vacuum = AnyonConfiguration::vacuum(eff);
    let loops = loops_braiding(eff, &[], &[], count, seed)?;
    let phases: Vec<i8> = loops.iter().map(|(_, l)| braid_phase(eff, l, &vacuum)).collect::<std::result::Result<_, _>>()?;
    out.push(item(
        "braid_x_around_vacuum",
        phases.iter().all(|p| *p == 1),
        format!("{} loops, phases {:?} (expected 1)", phases.len(), dedup(&phases)),
        json!({ "phases": phases }),
    ));
    out.push(item(
        "loop_deformation",
        deformation_ok,
        format!("{count} deformations per enclosed set, {} sets; phase constant within every set", deformation_data.len()),
        Value::Object(deformation_data),
    ));
    Ok(out)
}

fn dedup(p: &[i8]) -> Vec<i8> {
    let mut v = p.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Single-face loops of type `Y` (or `Z`) around one endpoint of a pair of
/// the same type, for both checkerboard classes of the moving face.
fn same_type_loops(eff: &EffectiveLattice) -> Result<Value> {
    let mut out = serde_json::Map::new();
    for kind in [AnyonType::Y, AnyonType::Z] {
        let (cfg, a, _) = pair(eff, kind)?;
        let (c, r) = eff.face_display(a);
        let mut row = serde_json::Map::new();
        for (label, dc, side) in [("other_class", 1, 1), ("same_class", 2, 2)] {
            let corner = eff.face_at(c - dc, r - dc).expect("face");
            let path = face_loop(eff, corner, side, side, kind)?;
            row.insert(label.into(), json!(braid_phase(eff, &path, &cfg)?));
        }
        out.insert(format!("{0}_around_{0}", kind.label()), Value::Object(row));
    }
    Ok(Value::Object(out))
}

fn t_junction(eff: &EffectiveLattice, detour: bool) -> Result<[StringPath; 3]> {
    let j = eff.num_plaquettes() / 2 + eff.nx() / 2;
    let (c, r) = eff.face_display(j);
    let f = |dc: i64, dr: i64| {
        let a = eff.face_at(c + dc, r + dr).expect("face");
        let b = eff.face_at(c + dc + 1, r + dr + 1).expect("face");
        Endpoint::Fermion(a, b)
    };
    let x = |from, to| string_between(eff, from, to, AnyonType::X);
    let right = x(f(0, 0), f(4, 0))?;
    let left = x(f(0, 0), f(-4, 0))?;
    let up = if detour {
        x(f(0, 0), f(2, 0))?.compose(eff, &x(f(2, 0), f(2, 4))?).compose(eff, &x(f(2, 4), f(0, 4))?)
    } else {
        x(f(0, 0), f(0, 4))?
    };
    Ok([right, up, left])
}

fn exchange_item(eff: &EffectiveLattice) -> Result<Item> {
    let straight = exchange_phase_xx(eff, &t_junction(eff, false)?)?;
    let deformed = exchange_phase_xx(eff, &t_junction(eff, true)?)?;
    Ok(item(
        "exchange_xx",
        straight == -1 && deformed == -1 && straight * straight == 1,
        format!("exchange {straight} (straight leg), {deformed} (deformed leg), double exchange {}", straight * straight),
        json!({ "straight": straight, "deformed": deformed, "double": straight * straight }),
    ))
}

fn rotation_item(eff: &EffectiveLattice) -> Result<Item> {
    let spin = eff.n_eff() / 2;
    let x: StateVector = logical_state(eff, spin, AnyonType::X)?;
    let y: StateVector = logical_state(eff, spin, AnyonType::Y)?;
    let half = one_qubit_rotation(&x, spin, PI / 2.0)?;
    // fidelity with -i|Y>; a global phase drops out
    let f_half = y.fidelity(&half);
    let ov = y.overlap(&half);
    let identity = x.fidelity(&one_qubit_rotation(&x, spin, 0.0)?);
    let quarter = one_qubit_rotation(&x, spin, PI / 4.0)?;
    let (qx, qy) = (x.fidelity(&quarter), y.fidelity(&quarter));
    let ok = f_half >= 1.0 - 1e-10 && (identity - 1.0).abs() < 1e-12 && (qx - 0.5).abs() < 1e-12 && (qy - 0.5).abs() < 1e-12;
    Ok(item(
        "one_qubit_rotation",
        ok,
        format!("θ = π/2: |<Y|ψ>|² = {f_half:.15}, <Y|ψ> = {:.3e}{:+.15}i; θ = π/4: {qx:.12}, {qy:.12}", ov.re, ov.im),
        json!({ "spin": spin, "fidelity_half": f_half, "overlap_half": [ov.re, ov.im], "theta0": identity, "quarter": [qx, qy] }),
    ))
}

fn gate_items(eff: &EffectiveLattice) -> Result<Vec<Item>> {
    use AnyonType::*;
    let layout = RegisterLayout::standard(eff)?;
    let t = controlled_phase_experiment(eff, &layout)?;
    let vacuum_ok = AnyonType::ALL.iter().all(|&a| t.get(Vacuum, a) == 1 && t.get(a, Vacuum) == 1);
    let data = json!({
        "layout": t.layout,
        "order": ["1", "X", "Y", "Z"],
        "phases": t.phases,
        "state_phases": t.state_phases,
    });
    let mut out = vec![item(
        "controlled_phase",
        t.get(X, Y) == -1 && t.get(X, X) == 1 && vacuum_ok,
        format!("|XY> {}, |XX> {}, vacuum entries {}; rows {:?}", t.get(X, Y), t.get(X, X), if vacuum_ok { "all +1" } else { "not all +1" }, t.phases),
        data,
    )];
    if let Some(sp) = t.state_phases {
        let worst = (0..4).flat_map(|i| (0..4).map(move |k| (i, k))).map(|(i, k)| (sp[i][k] - t.phases[i][k] as f64).abs()).fold(0.0, f64::max);
        out.push(item(
            "controlled_phase_states",
            worst < 1e-10,
            format!("state-vector phases agree with the symbolic table to {worst:.1e}"),
            json!({ "max_difference": worst }),
        ));
    }
    Ok(out)
}

pub fn run_anyon_suite(cfg: &ExperimentConfig) -> Result<AnyonReport> {
    let a = &cfg.anyons;
    let small = lattice(a.small_nx, a.small_ny)?;
    let braid = lattice(a.braid_nx, a.braid_ny)?;
    let gate = lattice(a.gate_nx, a.gate_ny)?;
    let mut items = effective_model_items(&small, a.j_eff)?;
    items.push(fusion_item(&small)?);
    items.extend(braiding_items(&braid, a.deformations, cfg.seed)?);
    items.push(exchange_item(&braid)?);
    items.push(rotation_item(&small)?);
    items.extend(gate_items(&gate)?);
    let same_type_loops = same_type_loops(&braid)?;
    Ok(AnyonReport { items, same_type_loops })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fusion_rules_literal() {
        assert_eq!(expected_fusion(AnyonType::Z, AnyonType::X), AnyonType::Y);
        for a in AnyonType::ALL {
            for b in AnyonType::ALL {
                assert_eq!(expected_fusion(a, b), expected_fusion(b, a));
            }
        }
    }
}
