//! Plain-text result formats shared by the command-line tool, the
//! deletion-script replayer, and the golden tests.
//!
//! Almost-sure reachability sets render as a header line `asr <count>`
//! followed by one vertex id per line, ascending. Decompositions render
//! as `mec <count>`, one line per component (ascending ids separated by
//! single spaces, components ordered by smallest member), then a
//! trailing `unassigned:` line listing the leftover vertices. Lines
//! starting with `#` are comments; instrumentation is emitted as
//! `# stat <name> <value>` so it can ride along without disturbing
//! consumers that compare result lines.

use crate::mec_dp::MecDecomposition;

/// Renders an almost-sure reachability set. `set` must be sorted.
pub fn render_asr(set: &[usize]) -> String {
    debug_assert!(set.windows(2).all(|w| w[0] < w[1]), "set must ascend");
    let mut out = String::new();
    out.push_str(&format!("asr {}\n", set.len()));
    for &v in set {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Renders a maximal end-component decomposition in canonical order.
pub fn render_mec(d: &MecDecomposition) -> String {
    let mut out = String::new();
    out.push_str(&format!("mec {}\n", d.mecs.len()));
    for mec in &d.mecs {
        let words: Vec<String> = mec.iter().map(|v| v.to_string()).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    let words: Vec<String> = d.unassigned.iter().map(|v| v.to_string()).collect();
    out.push_str("unassigned:");
    if !words.is_empty() {
        out.push(' ');
        out.push_str(&words.join(" "));
    }
    out.push('\n');
    out
}

/// Renders instrumentation counters as `# stat` comment lines.
pub fn render_stats(pairs: &[(&str, u64)]) -> String {
    let mut out = String::new();
    for (name, value) in pairs {
        out.push_str(&format!("# stat {name} {value}\n"));
    }
    out
}
