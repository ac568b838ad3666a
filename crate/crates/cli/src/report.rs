//! Result documents: text summaries and stable-schema JSON.
//!
//! JSON keys are sorted and every float is written with 17 significant
//! digits, so two runs with the same seed produce byte-identical files.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use qsdc_core::adversary::{exact_block_success, exact_message_success, EveStrategy};
use qsdc_core::channel::{audit_reference_noise_cases, ChannelTopology, NoiseConfig};
use qsdc_core::session::{
    exact_block_rates, exact_message_rates, paper_claim_message_success, RunStats, SessionConfig,
    PAPER_CLAIM_BLOCK_SUCCESS,
};

use crate::args::OracleConfig;

/// Pretty printer that writes floats as `d.dddddddddddddddde±x`.
struct FixedPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FixedPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes with sorted keys and fixed float precision, plus a trailing newline.
pub fn to_stable_json(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedPrecision(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn noise_json(noise: &NoiseConfig) -> Value {
    json!({
        "px1": noise.px1(),
        "pz1": noise.pz1(),
        "px2": noise.px2(),
        "pz2": noise.pz2(),
    })
}

pub fn results_json(cfg: &SessionConfig, stats: &RunStats) -> Value {
    json!({
        "config": {
            "eve": cfg.topology.eve.name(),
            "message": cfg.message.to_bit_string(),
            "message_bits": cfg.message.len(),
            "noise": noise_json(&cfg.noise),
            "noise_placement": cfg.topology.placement.name(),
            "seed": cfg.master_seed,
            "trials": cfg.trials,
        },
        "block_error_rate": stats.block_error_rate,
        "bit_error_rate": stats.bit_error_rate,
        "eve_block_success_rate": stats.eve_block_success_rate,
        "eve_message_success_rate": stats.eve_message_success_rate,
        "blocks_per_trial": stats.blocks_per_trial,
        "oracle_block_error_rate": stats.oracle_block_error_rate,
        "oracle_bit_error_rate": stats.oracle_bit_error_rate,
        "oracle_block_success": stats.oracle_block_success,
        "oracle_message_success": stats.oracle_message_success,
        "paper_claim_block_success": stats.paper_claim_block_success,
        "paper_claim_message_success": stats.paper_claim_message_success,
        "seed": cfg.master_seed,
        "trials": stats.trials,
    })
}

fn describe_noise(noise: &NoiseConfig, topology: &ChannelTopology) -> String {
    format!(
        "px1={} pz1={} px2={} pz2={} ({})",
        noise.px1(),
        noise.pz1(),
        noise.px2(),
        noise.pz2(),
        topology.placement.name()
    )
}

pub fn results_text(cfg: &SessionConfig, stats: &RunStats) -> String {
    let n = cfg.message.len();
    let mut out = String::new();
    out.push_str("QSDC Monte Carlo run\n");
    out.push_str(&format!(
        "  message            {} ({} bits, {} blocks)\n",
        if n == 0 { "<empty>".to_string() } else { cfg.message.to_bit_string() },
        n,
        stats.blocks_per_trial
    ));
    out.push_str(&format!("  trials             {}\n", stats.trials));
    out.push_str(&format!("  seed               {}\n", cfg.master_seed));
    out.push_str(&format!("  eve                {}\n", cfg.topology.eve));
    out.push_str(&format!("  noise              {}\n", describe_noise(&cfg.noise, &cfg.topology)));
    out.push_str("Bob\n");
    out.push_str(&format!(
        "  block error rate   {:.6}  (exact {:.6})\n",
        stats.block_error_rate, stats.oracle_block_error_rate
    ));
    out.push_str(&format!(
        "  bit error rate     {:.6}  (exact {:.6})\n",
        stats.bit_error_rate, stats.oracle_bit_error_rate
    ));
    out.push_str("Eve\n");
    out.push_str(&format!(
        "  block success      {:.6}  (exact {:.6}, published claim {:.6})\n",
        stats.eve_block_success_rate, stats.oracle_block_success, stats.paper_claim_block_success
    ));
    out.push_str(&format!(
        "  message success    {:.6e}  (exact {:.6e}, published claim (1/4)^{} = {:.6e})\n",
        stats.eve_message_success_rate, stats.oracle_message_success, n, stats.paper_claim_message_success
    ));
    out
}

/// Everything the `oracle` subcommand reports.
pub fn oracle_json(cfg: &OracleConfig) -> Value {
    let (rates, message_success) = match &cfg.message {
        Some(m) => exact_message_rates(m, &cfg.noise, &cfg.topology),
        None => {
            let r = exact_block_rates(&cfg.noise, &cfg.topology);
            (r, r.eve_block_success.powi(cfg.message_bits as i32 / 2))
        }
    };
    let n_blocks = (cfg.message_bits / 2) as u32;
    let strategies: Vec<Value> = EveStrategy::ALL
        .iter()
        .map(|&s| {
            json!({
                "eve": s.name(),
                "exact_block_success": exact_block_success(s),
                "exact_message_success": exact_message_success(s, n_blocks),
            })
        })
        .collect();
    let audit: Vec<Value> = audit_reference_noise_cases()
        .iter()
        .map(|a| {
            let f = a.reference.flips;
            json!({
                "case": a.reference.case,
                "description": a.reference.description,
                "flips": {"x1": f.x1, "z1": f.z1, "x2": f.x2, "z2": f.z2},
                "printed_kind": a.reference.printed_kind.symbol(),
                "printed_sign": a.reference.printed_sign,
                "computed_kind": a.computed_kind.symbol(),
                "computed_phase_re": a.computed_phase.re,
                "computed_phase_im": a.computed_phase.im,
                "kind_agrees": a.kind_agrees,
                "sign_agrees": a.sign_agrees,
            })
        })
        .collect();
    json!({
        "config": {
            "eve": cfg.topology.eve.name(),
            "message": cfg.message.as_ref().map(|m| m.to_bit_string()),
            "message_bits": cfg.message_bits,
            "noise": noise_json(&cfg.noise),
            "noise_placement": cfg.topology.placement.name(),
        },
        "exact_block_success": exact_block_success(cfg.topology.eve),
        "exact_message_success": exact_message_success(cfg.topology.eve, n_blocks),
        "oracle_block_error_rate": rates.block_error,
        "oracle_bit_error_rate": rates.bit_error,
        "oracle_block_success": rates.eve_block_success,
        "oracle_message_success": message_success,
        "paper_claim_block_success": PAPER_CLAIM_BLOCK_SUCCESS,
        "paper_claim_message_success": paper_claim_message_success(cfg.message_bits),
        "strategies": strategies,
        "noise_case_audit": audit,
    })
}

pub fn oracle_text(cfg: &OracleConfig) -> String {
    let doc = oracle_json(cfg);
    let f = |key: &str| doc[key].as_f64().unwrap_or(f64::NAN);
    let mut out = String::new();
    out.push_str("Exact enumeration oracle\n");
    out.push_str(&format!("  eve                {}\n", cfg.topology.eve));
    out.push_str(&format!("  noise              {}\n", describe_noise(&cfg.noise, &cfg.topology)));
    out.push_str(&format!("  message bits       {}\n", cfg.message_bits));
    out.push_str(&format!(
        "  Eve block success  {:.6} noiseless, {:.6} with noise (published claim {:.6})\n",
        f("exact_block_success"),
        f("oracle_block_success"),
        f("paper_claim_block_success")
    ));
    out.push_str(&format!(
        "  Eve message success {:.6e} (published claim (1/4)^{} = {:.6e})\n",
        f("oracle_message_success"),
        cfg.message_bits,
        f("paper_claim_message_success")
    ));
    out.push_str(&format!(
        "  Bob block error    {:.6}, bit error {:.6}\n",
        f("oracle_block_error_rate"),
        f("oracle_bit_error_rate")
    ));
    out.push_str("\nNoiseless Eve block success by strategy\n");
    for s in EveStrategy::ALL {
        out.push_str(&format!("  {:<25} {:.6}\n", s.name(), exact_block_success(s)));
    }
    out.push_str("\nMixed-flip cases on phi+ (computed vs published)\n");
    for a in audit_reference_noise_cases() {
        let sign = if a.computed_phase.re < 0.0 { '-' } else { '+' };
        let printed = if a.reference.printed_sign < 0.0 { '-' } else { '+' };
        let verdict = if a.kind_agrees && a.sign_agrees { "agrees" } else { "DISCREPANCY" };
        out.push_str(&format!(
            "  case {:<3} {:<44} computed {}{:<5} published {}{:<5} {}\n",
            a.reference.case,
            a.reference.description,
            sign,
            a.computed_kind.symbol(),
            printed,
            a.reference.printed_kind.symbol(),
            verdict
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsdc_core::session::{run_monte_carlo, Message};

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_stable_json(&json!({"b": 0.0625, "a": 1u64, "c": 0.0}));
        assert_eq!(
            s,
            "{\n  \"a\": 1,\n  \"b\": 6.2500000000000000e-2,\n  \"c\": 0.0000000000000000e0\n}\n"
        );
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["b"].as_f64(), Some(0.0625));
    }

    #[test]
    fn results_schema() {
        let cfg = SessionConfig::new(
            Message::from_bit_str("0110").unwrap(),
            NoiseConfig::noiseless(),
            ChannelTopology::default(),
            3,
            100,
        )
        .unwrap();
        let stats = run_monte_carlo(&cfg);
        let doc = results_json(&cfg, &stats);
        let keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "bit_error_rate",
                "block_error_rate",
                "blocks_per_trial",
                "config",
                "eve_block_success_rate",
                "eve_message_success_rate",
                "oracle_bit_error_rate",
                "oracle_block_error_rate",
                "oracle_block_success",
                "oracle_message_success",
                "paper_claim_block_success",
                "paper_claim_message_success",
                "seed",
                "trials",
            ]
        );
        assert_eq!(doc["bit_error_rate"].as_f64(), Some(0.0));
        assert_eq!(doc["paper_claim_block_success"].as_f64(), Some(0.0625));
        assert_eq!(doc["paper_claim_message_success"].as_f64(), Some(0.00390625));
    }
}
