//! Serialization helpers shared by every subcommand.
//!
//! Two formats, one rule: identical arguments must produce identical bytes.
//! JSON field order comes from struct definitions, and every float — JSON or
//! CSV — is written through the same fixed-width scientific formatter, 17
//! significant digits, enough to round-trip an f64 exactly.

use std::io::{self, Write};

use serde::Serialize;

/// `{:.16e}` renders one leading digit plus sixteen more.
pub fn float(value: f64) -> String {
    format!("{value:.16e}")
}

struct SciFloats;

impl serde_json::ser::Formatter for SciFloats {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json(value: &impl Serialize) -> Result<Vec<u8>, serde_json::Error> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFloats);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

/// The header every run carries: tool, version, the subcommand, the full
/// resolved configuration, and the seed if the command consumed one.
#[derive(Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: C,
    pub seed: Option<u64>,
    pub result: R,
}

impl<C: Serialize, R: Serialize> Envelope<C, R> {
    pub fn new(command: &'static str, config: C, seed: Option<u64>, result: R) -> Self {
        Envelope {
            tool: "rus-adqc",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            seed,
            result,
        }
    }
}

/// One CSV row of the frozen per-trial schema.
pub struct CsvRow {
    pub trial: usize,
    pub stop_step: Option<usize>,
    pub final_distance: f64,
}

/// CSV layout: a commented header carrying the same fields as the JSON
/// envelope (config as one-line JSON), an optional commented summary, the
/// frozen column row, then one row per trial in index order.
pub fn write_csv(
    out: &mut dyn Write,
    command: &str,
    config_json: &[u8],
    seed: u64,
    summary: Option<&rus_adqc::synth1q::HittingSummary>,
    rows: &[CsvRow],
) -> io::Result<()> {
    writeln!(out, "# tool rus-adqc")?;
    writeln!(out, "# version {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# command {command}")?;
    out.write_all(b"# config ")?;
    out.write_all(config_json)?;
    writeln!(out, "# seed {seed}")?;
    if let Some(s) = summary {
        let fmt_opt = |v: Option<f64>| v.map_or_else(|| "none".into(), float);
        writeln!(
            out,
            "# summary trials={} successes={} failures={} mean_steps={} median_steps={} p95_steps={} max_steps={}",
            s.trials,
            s.successes,
            s.failures,
            fmt_opt(s.mean_steps),
            fmt_opt(s.median_steps),
            fmt_opt(s.p95_steps),
            s.max_steps.map_or_else(|| "none".into(), |m| m.to_string()),
        )?;
    }
    writeln!(out, "trial,stop_step,final_distance,capped")?;
    for row in rows {
        let step = row.stop_step.map_or_else(String::new, |s| s.to_string());
        writeln!(
            out,
            "{},{},{},{}",
            row.trial,
            step,
            float(row.final_distance),
            row.stop_step.is_none()
        )?;
    }
    Ok(())
}
