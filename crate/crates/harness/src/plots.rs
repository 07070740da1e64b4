//! Self-contained matplotlib scripts for the emitted datasets. Each script
//! sits next to its CSV and reads it by relative path.

use std::path::{Path, PathBuf};

use crate::error::{HarnessError, Result};
use crate::output::{read_table, write_bytes};

const PRELUDE: &str = r##"import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(name):
    with open(os.path.join(HERE, name)) as f:
        rows = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(rows))


def value(row, key):
    v = row.get(key, "")
    return float(v) if v not in ("", "NaN") else float("nan")

"##;

fn heat_map(csv: &str) -> String {
    format!(
        r#"{PRELUDE}
rows = load("{csv}")
jx = sorted({{value(r, "jx") for r in rows}})
jy = sorted({{value(r, "jy") for r in rows}})
grid = [[float("nan")] * len(jx) for _ in jy]
for r in rows:
    grid[jy.index(value(r, "jy"))][jx.index(value(r, "jx"))] = value(r, "gap")

fig, ax = plt.subplots(figsize=(5, 4.2))
mesh = ax.pcolormesh(jx, jy, grid, shading="nearest", cmap="viridis")
fig.colorbar(mesh, ax=ax, label=r"$\Delta E$")
ax.plot([0, 1], [1, 0], color="white", lw=1, ls="--")
ax.set_xlabel(r"$J_x$")
ax.set_ylabel(r"$J_y$")
ax.set_title(r"Energy gap, $J_z = 1$")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
if "--show" in sys.argv:
    plt.show()
"#,
        stem = csv.trim_end_matches(".csv")
    )
}

fn loglog(csv: &str) -> String {
    format!(
        r#"{PRELUDE}
rows = load("{csv}")
j = [value(r, "j") for r in rows]
numeric = [value(r, "gap") for r in rows]
theory = [value(r, "perturbative") for r in rows]

fig, ax = plt.subplots(figsize=(5, 4))
ax.loglog(j, theory, color="tab:blue", lw=1.5, label=r"$4 J_{{\rm eff}}$")
ax.loglog(j, numeric, color="tab:red", ls="--", marker="o", ms=3, label="numerical")
ax.set_xlabel(r"$J = J_x = J_y$")
ax.set_ylabel(r"$\Delta E$")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
if "--show" in sys.argv:
    plt.show()
"#,
        stem = csv.trim_end_matches(".csv")
    )
}

fn level_diagram(csv: &str) -> String {
    format!(
        r#"{PRELUDE}
rows = load("{csv}")
energies = [value(r, "energy") for r in rows]
e0 = min(energies)
jx, jy, jz = (value(rows[0], k) for k in ("jx", "jy", "jz"))
jeff = jx * jx * jy * jy / (16 * jz ** 3)
scale = jeff if jeff > 0 else 1.0

fig, ax = plt.subplots(figsize=(4, 5))
for e in energies:
    ax.hlines((e - e0) / scale, 0, 1, color="black", lw=0.8)
ax.set_xticks([])
ax.set_ylabel(r"$(E - E_0) / J_{{\rm eff}}$" if jeff > 0 else r"$E - E_0$")
ax.set_title("J = {{:g}}".format(jx))
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
if "--show" in sys.argv:
    plt.show()
"#,
        stem = csv.trim_end_matches(".csv")
    )
}

fn transport(csv: &str) -> String {
    format!(
        r#"{PRELUDE}
rows = load("{csv}")
curves = {{}}
for r in rows:
    curves.setdefault(value(r, "ramp_time"), []).append((value(r, "time"), value(r, "overlap")))

fig, ax = plt.subplots(figsize=(5, 4))
for t, pts in sorted(curves.items()):
    ax.plot([p[0] / t for p in pts], [p[1] for p in pts], marker="o", ms=3, label="T = {{:g}}".format(t))
ax.set_xlabel("time / T")
ax.set_ylabel("weight in trapped state")
ax.set_ylim(0, 1.02)
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{stem}.png"), dpi=150)
if "--show" in sys.argv:
    plt.show()
"#,
        stem = csv.trim_end_matches(".csv")
    )
}

/// Writes one plotting script per dataset, next to it, and returns the
/// script paths. The kind of plot follows the dataset's schema line.
pub fn emit_plot_scripts(datasets: &[PathBuf]) -> Result<Vec<PathBuf>> {
    if datasets.is_empty() {
        return Err(HarnessError::MissingDataset("no datasets given".into()));
    }
    let mut out = Vec::new();
    for path in datasets {
        if path.as_os_str().is_empty() {
            return Err(HarnessError::MissingDataset("empty path".into()));
        }
        if !path.is_file() {
            return Err(HarnessError::MissingDataset(path.display().to_string()));
        }
        let (schema, _, _) = read_table(path)?;
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| HarnessError::MissingDataset(path.display().to_string()))?;
        let kind = schema.split_whitespace().nth(1).unwrap_or("");
        let script = match kind {
            "gap-sweep" => heat_map(name),
            "gap-scaling" => loglog(name),
            "spectrum" => level_diagram(name),
            "transport" => transport(name),
            _ => return Err(HarnessError::Config(format!("{}: no plot for schema {schema:?}", path.display()))),
        };
        let dir = path.parent().unwrap_or(Path::new("."));
        out.push(write_bytes(dir, &format!("plot_{}.py", name.trim_end_matches(".csv")), script.as_bytes())?);
    }
    Ok(out)
}

/// Datasets in `dir` that have a plot.
pub fn plottable(dir: &Path) -> Vec<PathBuf> {
    ["gap_sweep.csv", "gap_scaling.csv", "spectrum.csv", "transport.csv"]
        .iter()
        .map(|n| dir.join(n))
        .filter(|p| p.is_file())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::Table;

    #[test]
    fn scripts_reference_their_dataset() {
        let dir = std::env::temp_dir().join(format!("hc-plots-{}", std::process::id()));
        let mut t = Table::new("gap-scaling", 1, &["j", "gap", "perturbative"]);
        t.push(vec!["0.1".into(), "1e-5".into(), "2.5e-5".into()]);
        let csv = t.write(&dir, "gap_scaling.csv").unwrap();
        let scripts = emit_plot_scripts(&[csv]).unwrap();
        let text = std::fs::read_to_string(&scripts[0]).unwrap();
        assert!(text.contains("load(\"gap_scaling.csv\")"));
        assert!(text.contains("loglog"));
        assert!(matches!(emit_plot_scripts(&[PathBuf::new()]), Err(HarnessError::MissingDataset(_))));
        assert!(matches!(emit_plot_scripts(&[dir.join("absent.csv")]), Err(HarnessError::MissingDataset(_))));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
