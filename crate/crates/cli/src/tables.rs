//! Encoding tables regenerated from the codec at runtime.

use num_complex::Complex64;
use qsdc_core::codec::{classify_bell, encode, select_encoding_op, BellKind, MessageBlock};

pub fn emit_tables() -> String {
    let mut out = String::new();
    for carrier in BellKind::ALL {
        out.push_str(&format!("carrier {carrier}\n"));
        out.push_str("  block  U     output  phase\n");
        for block in MessageBlock::ALL {
            let gate = select_encoding_op(carrier, block);
            let (kind, phase) =
                classify_bell(&encode(carrier, block)).expect("encoded carriers are Bell states");
            out.push_str(&format!(
                "  {:<6} {:<5} {:<7} {}\n",
                block.to_string(),
                gate.name(),
                kind.symbol(),
                phase_label(phase)
            ));
        }
    }
    out
}

fn phase_label(phase: Complex64) -> String {
    if phase.im.abs() < 1e-12 {
        if phase.re > 0.0 { "+1" } else { "-1" }.to_string()
    } else {
        format!("{:+.3}{:+.3}i", phase.re, phase.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_follow_codec() {
        let text = emit_tables();
        assert_eq!(text.lines().filter(|l| l.starts_with("  ") && !l.contains("block")).count(), 16);
        assert_eq!(text.lines().filter(|l| l.starts_with("carrier")).count(), 4);
        let section = |name: &str| {
            text.split("carrier ")
                .find(|s| s.starts_with(name))
                .unwrap()
                .to_string()
        };
        assert!(section("phi+").contains("  11     iY    psi-"));
        assert!(section("psi+").contains("  10     iY    phi-"));
    }
}
