//! Plot-script generation: a self-contained matplotlib script per command.

use crate::config::CommandKind;
use crate::error::CliError;
use std::path::Path;

/// Verify the CSV exists and holds at least one data row, then write the
/// canonical plotting script for the command kind.
///
/// Supported kinds: `info-curve` (plateau), `emergence` (median with band),
/// `mach-zehnder` (detection probability versus record overlap).
pub fn emit_plot_script(
    csv_path: &Path,
    kind: CommandKind,
    script_path: &Path,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(csv_path)
        .map_err(|e| CliError::Config(format!("cannot read CSV {}: {e}", csv_path.display())))?;
    if text.lines().filter(|l| !l.trim().is_empty()).count() < 2 {
        return Err(CliError::Config(format!(
            "CSV {} has no data rows to plot",
            csv_path.display()
        )));
    }
    let body = match kind {
        CommandKind::InfoCurve => info_curve_script(),
        CommandKind::Emergence => emergence_script(),
        CommandKind::MachZehnder => mach_zehnder_script(),
        other => {
            return Err(CliError::Config(format!(
                "no canonical figure for command `{}`",
                other.name()
            )))
        }
    };
    let script = format!(
        "#!/usr/bin/env python3\nimport csv\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\nCSV_PATH = {:?}\n\nwith open(CSV_PATH, newline=\"\") as f:\n    rows = list(csv.DictReader(f))\n\n{body}",
        csv_path.display().to_string()
    );
    std::fs::write(script_path, script)
        .map_err(|e| CliError::Invariant(format!("cannot write {}: {e}", script_path.display())))
}

fn info_curve_script() -> &'static str {
    r#"m = [int(r["m"]) for r in rows]
info = [float(r["mean_information_bits"]) for r in rows]
entropy = float(rows[0]["system_entropy_bits"])

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(m, info, marker="o", label="mean mutual information")
ax.axhline(entropy, linestyle="--", color="gray", label="system entropy")
ax.axhline(2 * entropy, linestyle=":", color="gray", label="2 x system entropy")
ax.set_xlabel("fragment subset size m")
ax.set_ylabel("information (bits)")
ax.set_title("Fragment information plateau")
ax.legend()
fig.tight_layout()
fig.savefig("info_curve.png", dpi=150)
print("wrote info_curve.png")
"#
}

fn emergence_script() -> &'static str {
    r#"n = [int(r["n"]) for r in rows]
median = [float(r["median_negativity"]) for r in rows]
low = [float(r["min_negativity"]) for r in rows]
high = [float(r["max_negativity"]) for r in rows]
mp_median = [float(r["median_mp_distance"]) for r in rows]

fig, ax = plt.subplots(figsize=(6, 4))
ax.fill_between(n, low, high, alpha=0.25, label="negativity min..max")
ax.plot(n, median, marker="o", label="median negativity")
ax.plot(n, mp_median, marker="s", linestyle="--", label="median fit distance")
ax.set_xlabel("environment fragments n")
ax.set_ylabel("value")
ax.set_title("Fragment channels versus environment size")
ax.legend()
fig.tight_layout()
fig.savefig("emergence.png", dpi=150)
print("wrote emergence.png")
"#
}

fn mach_zehnder_script() -> &'static str {
    r#"gamma = [float(r["gamma"]) for r in rows]
p_a = [float(r["p_detector_a"]) for r in rows]
p_b = [float(r["p_detector_b"]) for r in rows]

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(gamma, p_a, marker="o", label="P(A)")
ax.plot(gamma, p_b, marker="s", label="P(B)")
ax.set_xlabel("record overlap")
ax.set_ylabel("detection probability")
ax.set_ylim(-0.05, 1.05)
ax.set_title("Which-path record versus interference")
ax.legend()
fig.tight_layout()
fig.savefig("mach_zehnder.png", dpi=150)
print("wrote mach_zehnder.png")
"#
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_dir(tag: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("qdarwin-plot-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn writes_scripts_for_supported_kinds() {
        let dir = tmp_dir("ok");
        let csv = dir.join("data.csv");
        std::fs::write(&csv, "gamma,p_detector_a,p_detector_b\n0,0.5,0.5\n").unwrap();
        let script = dir.join("plot.py");
        emit_plot_script(&csv, CommandKind::MachZehnder, &script).unwrap();
        let text = std::fs::read_to_string(&script).unwrap();
        assert!(text.contains("matplotlib"));
        assert!(text.contains("data.csv"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn rejects_unknown_kinds_and_empty_csv() {
        let dir = tmp_dir("bad");
        let csv = dir.join("data.csv");
        std::fs::write(&csv, "outcome,p\n").unwrap();
        let script = dir.join("plot.py");
        // Header only: no data rows.
        assert!(emit_plot_script(&csv, CommandKind::MachZehnder, &script).is_err());
        std::fs::write(&csv, "outcome,p\nplus,0.5\n").unwrap();
        assert!(emit_plot_script(&csv, CommandKind::Eraser, &script).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
