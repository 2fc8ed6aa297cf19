//! Run manifests: enough context next to every output file to reproduce it.

use std::path::Path;

use serde_json::json;

use cirsensor_core::optimizer::find_zero_crossing;
use cirsensor_core::scattering::confinement_factor;

use crate::config::Run;
use crate::output::write_json;
use crate::CliError;

/// Write `<stem>.manifest.json` next to the command outputs.
///
/// The manifest embeds the full effective configuration under `config`, so
/// passing the manifest itself back through `--config` reproduces the run
/// bit-identically (the manifest loader unwraps that field).
pub fn write_manifest(
    out_dir: &Path,
    stem: &str,
    command: &str,
    args: serde_json::Value,
    run: &Run,
    outputs: &[String],
    extra_derived: serde_json::Value,
) -> Result<(), CliError> {
    let c_p = confinement_factor(run.p, &run.config.trap)
        .map(|c| json!(c))
        .unwrap_or(json!(null));
    let temperature_nk = run
        .units
        .momentum_to_temperature(run.p)
        .map(|t| json!(t))
        .unwrap_or(json!(null));
    let mut derived = json!({
        "p": run.p,
        "e_total": run.collision.e_total,
        "k": run.collision.k,
        "c_p": c_p,
        "temperature_nk": temperature_nk,
        "zero_crossing_b": find_zero_crossing(&run.config.resonance, run.collision.e_total),
    });
    if let (Some(d), Some(e)) = (derived.as_object_mut(), extra_derived.as_object()) {
        for (k, v) in e {
            d.insert(k.clone(), v.clone());
        }
    }
    let manifest = json!({
        "tool": "cirsensor",
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp": chrono::Utc::now().to_rfc3339(),
        "command": command,
        "args": args,
        "config": serde_json::to_value(&run.config)
            .map_err(|e| CliError::Numeric(e.to_string()))?,
        "derived": derived,
        "outputs": outputs,
    });
    write_json(&out_dir.join(format!("{stem}.manifest.json")), &manifest)
}
