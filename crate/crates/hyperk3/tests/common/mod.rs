#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use hyperk3_core::search::SearchEntry;

/// One golden row in a normalized form: `k` sorted numerically, missing
/// columns empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Row {
    pub psi: String,
    pub case: String,
    pub k: Vec<u64>,
    pub st: String,
    pub dynkin: String,
    pub chi1_tilde: String,
    pub trace: String,
    pub sh: String,
}

pub fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn sorted_k(s: &str) -> Vec<u64> {
    let mut k: Vec<u64> = s.split(',').map(|x| x.trim().parse().expect("k entry")).collect();
    k.sort();
    k
}

/// Rows of a TSV table whose header line starts with `# `.
pub fn read_table(text: &str) -> Vec<Row> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().expect("header").trim_start_matches("# ").split('\t').collect();
    let col = |cells: &[&str], name: &str| -> String {
        header.iter().position(|h| *h == name).map(|i| cells[i].to_string()).unwrap_or_default()
    };
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let cells: Vec<&str> = l.split('\t').collect();
            assert_eq!(cells.len(), header.len(), "row {l}");
            let k = if header.contains(&"k_as_printed") { col(&cells, "k_as_printed") } else { col(&cells, "k") };
            Row {
                psi: col(&cells, "psi"),
                case: col(&cells, "case"),
                k: sorted_k(&k),
                st: col(&cells, "st"),
                dynkin: col(&cells, "dynkin"),
                chi1_tilde: col(&cells, "chi1_tilde"),
                trace: col(&cells, "trace"),
                sh: col(&cells, "sh"),
            }
        })
        .collect()
}

/// The same normalized row for a scan entry, keeping only the columns the
/// golden table has.
pub fn entry_row(e: &SearchEntry, with_case: bool, lehmer: bool) -> Row {
    let opt = |s: &Option<String>| s.clone().unwrap_or_default();
    Row {
        psi: e.psi_label.to_string(),
        case: if with_case { e.certificate.case.to_string() } else { String::new() },
        k: e.k.clone(),
        st: e.st_label.clone(),
        dynkin: if lehmer { opt(&e.dynkin) } else { String::new() },
        chi1_tilde: if lehmer { opt(&e.chi1_tilde) } else { String::new() },
        trace: if lehmer { e.trace_tilde.as_ref().map(|t| t.to_string()).unwrap_or_default() } else { String::new() },
        sh: e.sh().map(|s| s.to_string()).unwrap_or_default(),
    }
}

pub fn distinct(rows: &[Row]) -> BTreeSet<Row> {
    rows.iter().cloned().collect()
}
