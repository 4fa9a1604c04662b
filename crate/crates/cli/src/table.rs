//! Coded vs uncoded transmission counts over a grid of `(n, k)`.
//!
//! Coded cells are `NA` when `k > n`. The uncoded side has at most two
//! columns: `k = 2` (shown when 2 is in the k list) and `3 <= k <= N` (shown
//! when the list has any `k >= 3`; the count does not depend on `k` there).

use std::fmt::Write as _;

use csix_core::{baseline_no_coding_count, optimal_count, ProblemInstance};
use serde::{Deserialize, Serialize};

use crate::{na, parse_na, OutputFormat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub coded: Vec<Option<usize>>,
    pub uncoded_k2: Option<usize>,
    pub uncoded_k3plus: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub k_list: Vec<usize>,
    pub show_uncoded_k2: bool,
    pub show_uncoded_k3plus: bool,
    pub rows: Vec<TableRow>,
}

fn count(n: usize, k: usize, f: impl Fn(&ProblemInstance) -> Option<usize>) -> Option<usize> {
    ProblemInstance::new(n, k).ok().and_then(|i| f(&i))
}

impl ComparisonTable {
    pub fn build(n_list: &[usize], k_list: &[usize]) -> Self {
        let show_uncoded_k2 = k_list.contains(&2);
        let show_uncoded_k3plus = k_list.iter().any(|&k| k >= 3);
        let rows = n_list
            .iter()
            .map(|&n| TableRow {
                n,
                coded: k_list.iter().map(|&k| count(n, k, |i| Some(optimal_count(i)))).collect(),
                uncoded_k2: if show_uncoded_k2 {
                    count(n, 2, |i| baseline_no_coding_count(i).ok())
                } else {
                    None
                },
                uncoded_k3plus: if show_uncoded_k3plus {
                    count(n, 3, |i| baseline_no_coding_count(i).ok())
                } else {
                    None
                },
            })
            .collect();
        Self {
            k_list: k_list.to_vec(),
            show_uncoded_k2,
            show_uncoded_k3plus,
            rows,
        }
    }

    fn uncoded_cells(&self, row: &TableRow) -> Vec<Option<usize>> {
        let mut cells = Vec::new();
        if self.show_uncoded_k2 {
            cells.push(row.uncoded_k2);
        }
        if self.show_uncoded_k3plus {
            cells.push(row.uncoded_k3plus);
        }
        cells
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["N".to_string()];
        cols.extend(self.k_list.iter().map(|k| format!("NC k={k}")));
        if self.show_uncoded_k2 {
            cols.push("no NC k=2".into());
        }
        if self.show_uncoded_k3plus {
            cols.push("no NC 3<=k<=N".into());
        }
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for row in &self.rows {
            let mut cells = vec![row.n.to_string()];
            cells.extend(row.coded.iter().map(|&c| na(c)));
            cells.extend(self.uncoded_cells(row).into_iter().map(na));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header = lines.next().ok_or("empty table")?;
        let mut cols = header.split(',');
        if cols.next() != Some("N") {
            return Err(format!("bad header: {header}"));
        }
        let mut k_list = Vec::new();
        let (mut show_uncoded_k2, mut show_uncoded_k3plus) = (false, false);
        for col in cols {
            if let Some(k) = col.strip_prefix("NC k=") {
                k_list.push(k.parse::<usize>().map_err(|e| format!("{col}: {e}"))?);
            } else if col == "no NC k=2" {
                show_uncoded_k2 = true;
            } else if col == "no NC 3<=k<=N" {
                show_uncoded_k3plus = true;
            } else {
                return Err(format!("unknown column {col}"));
            }
        }
        let width = 1 + k_list.len() + usize::from(show_uncoded_k2) + usize::from(show_uncoded_k3plus);
        let rows = lines
            .map(|line| {
                let f: Vec<&str> = line.split(',').collect();
                if f.len() != width {
                    return Err(format!("expected {width} fields: {line}"));
                }
                let n = f[0].parse::<usize>().map_err(|e| format!("{}: {e}", f[0]))?;
                let coded = f[1..=k_list.len()].iter().map(|s| parse_na(s)).collect::<Result<Vec<_>, _>>()?;
                let mut rest = f[1 + k_list.len()..].iter();
                let uncoded_k2 = if show_uncoded_k2 { parse_na(rest.next().unwrap())? } else { None };
                let uncoded_k3plus = if show_uncoded_k3plus { parse_na(rest.next().unwrap())? } else { None };
                Ok(TableRow {
                    n,
                    coded,
                    uncoded_k2,
                    uncoded_k3plus,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Self {
            k_list,
            show_uncoded_k2,
            show_uncoded_k3plus,
            rows,
        })
    }

    pub fn to_human(&self) -> String {
        const W: usize = 6;
        let coded_width = W * self.k_list.len();
        let mut out = String::new();
        let _ = writeln!(out, "{:<W$}| {:<coded_width$}| without NC", "", "with NC");
        let _ = write!(out, "{:<W$}| ", "");
        for k in &self.k_list {
            let _ = write!(out, "{:<W$}", format!("k={k}"));
        }
        out.push_str("| ");
        if self.show_uncoded_k2 {
            let _ = write!(out, "{:<W$}", "k=2");
        }
        if self.show_uncoded_k3plus {
            out.push_str("3<=k<=N");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{:<W$}| ", format!("N={}", row.n));
            for &c in &row.coded {
                let _ = write!(out, "{:<W$}", na(c));
            }
            out.push_str("| ");
            for c in self.uncoded_cells(row) {
                let _ = write!(out, "{:<W$}", na(c));
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        out
    }

    pub fn render(&self, fmt: OutputFormat) -> String {
        match fmt {
            OutputFormat::Human => self.to_human(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string(self).expect("plain data serializes");
                s.push('\n');
                s
            }
        }
    }
}
