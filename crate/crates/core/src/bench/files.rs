//! Instance bundles and 2TSP solution files.
//!
//! A bundle is a matrix file `<name>.matrix` plus `<name>.info`:
//!
//! ```text
//! fixed: 1 4 9
//! optimum: 12.75
//! hidden_order: 3 1 2 ...
//! ```
//!
//! `optimum` and `hidden_order` are left out of blind exports. A 2TSP
//! solution file holds both closed tours as 1-based labels, then the total.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::matrices::write_matrix;
use crate::matrices::{Permutation, SymmetricCostMatrix};
use crate::two_tsp::{Balance, TwoTourSolution, TwoTspInstance};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceBundle {
    pub matrix: SymmetricCostMatrix,
    /// 0-based fixed nodes.
    pub fixed: Vec<usize>,
    pub optimum: Option<f64>,
    pub hidden_order: Option<Permutation>,
    pub balance: Balance,
}

impl InstanceBundle {
    pub fn instance(&self) -> Result<TwoTspInstance> {
        TwoTspInstance::with_balance(self.matrix.clone(), &self.fixed, self.balance)
    }

    pub fn info_text(&self, blind: bool) -> String {
        let mut s = String::new();
        let labels: Vec<String> = self.fixed.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(s, "fixed: {}", labels.join(" "));
        if self.balance == Balance::Near {
            let _ = writeln!(s, "balance: near");
        }
        if !blind {
            if let Some(o) = self.optimum {
                let _ = writeln!(s, "optimum: {o}");
            }
            if let Some(p) = &self.hidden_order {
                let l: Vec<String> = p.labels().iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "hidden_order: {}", l.join(" "));
            }
        }
        s
    }

    pub fn parse_info(matrix: SymmetricCostMatrix, text: &str) -> Result<Self> {
        let mut bundle =
            InstanceBundle { matrix, fixed: Vec::new(), optimum: None, hidden_order: None, balance: Balance::Exact };
        let mut saw_fixed = false;
        for (lno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once(':').ok_or_else(|| Error::parse(lno + 1, "expected `key: value`"))?;
            let labels = || -> Result<Vec<usize>> {
                value
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::parse(lno + 1, format!("bad label {t:?}"))))
                    .collect()
            };
            match key.trim() {
                "fixed" => {
                    saw_fixed = true;
                    bundle.fixed = labels()?
                        .into_iter()
                        .map(|v| v.checked_sub(1).ok_or_else(|| Error::parse(lno + 1, "labels start at 1")))
                        .collect::<Result<_>>()?;
                }
                "optimum" => {
                    bundle.optimum = Some(
                        value.trim().parse().map_err(|_| Error::parse(lno + 1, "bad optimum value"))?,
                    );
                }
                "hidden_order" => bundle.hidden_order = Some(Permutation::from_labels(&labels()?)?),
                "balance" => {
                    bundle.balance = match value.trim() {
                        "exact" => Balance::Exact,
                        "near" => Balance::Near,
                        other => return Err(Error::parse(lno + 1, format!("unknown balance {other:?}"))),
                    }
                }
                other => return Err(Error::parse(lno + 1, format!("unknown key {other:?}"))),
            }
        }
        if !saw_fixed {
            return Err(Error::parse(0, "bundle info lacks a `fixed:` line"));
        }
        Ok(bundle)
    }
}

/// `(matrix file, info file)` for a bundle named `name` inside `dir`.
pub fn bundle_paths(dir: &Path, name: &str) -> (PathBuf, PathBuf) {
    (dir.join(format!("{name}.matrix")), dir.join(format!("{name}.info")))
}

pub fn write_bundle(dir: &Path, name: &str, bundle: &InstanceBundle, blind: bool) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let (mpath, ipath) = bundle_paths(dir, name);
    let mut buf = Vec::new();
    write_matrix(&mut buf, &bundle.matrix)?;
    std::fs::write(mpath, buf)?;
    std::fs::write(ipath, bundle.info_text(blind))?;
    Ok(())
}

/// Reads a bundle from its matrix file; the info file sits next to it.
pub fn read_bundle(matrix_path: &Path) -> Result<InstanceBundle> {
    let matrix: SymmetricCostMatrix = std::fs::read_to_string(matrix_path)?.parse()?;
    let info = matrix_path.with_extension("info");
    InstanceBundle::parse_info(matrix, &std::fs::read_to_string(info)?)
}

pub fn two_tour_solution_to_text(sol: &TwoTourSolution) -> String {
    let line = |t: &[usize]| {
        let mut l: Vec<String> = t.iter().map(|v| (v + 1).to_string()).collect();
        l.push("1".into());
        l.join(" ")
    };
    format!("{}\n{}\n{}\n", line(&sol.tour1), line(&sol.tour2), sol.total)
}

/// Parses a solution file; the total is recomputed from the tours.
pub fn read_two_tour_solution(inst: &TwoTspInstance, text: &str) -> Result<TwoTourSolution> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let mut tour = |which: usize| -> Result<Vec<usize>> {
        let (lno, l) = lines.next().ok_or_else(|| Error::parse(0, format!("missing tour {which}")))?;
        let mut labels = l
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .ok()
                    .and_then(|v| v.checked_sub(1))
                    .ok_or_else(|| Error::parse(lno + 1, format!("bad label {t:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        if labels.len() < 2 || labels.first() != Some(&0) || labels.last() != Some(&0) {
            return Err(Error::parse(lno + 1, "tours must start and end at node 1"));
        }
        labels.pop();
        Ok(labels)
    };
    let t1 = tour(1)?;
    let t2 = tour(2)?;
    Ok(TwoTourSolution::from_tours(inst.matrix(), t1, t2))
}
