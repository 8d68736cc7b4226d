//! Text formats for 2VRP instances and solutions.
//!
//! Instance:
//!
//! ```text
//! customers 2
//! capacity 3 2
//! depots 1 2 2 1
//! allow_empty_first 0
//! # left right fwd1 bwd1 fwd2 bwd2 demand fixed
//! 3 4 1 2 3 inf 3 1
//! 5 6 0 0 0 0 2 -
//! <matrix for vehicle 1>
//! <matrix for vehicle 2>
//! ```
//!
//! Node labels and customer numbers are 1-based; `fixed` is `1`, `2` or `-`.
//! Solution: `route1` / `route2` lines listing customers with `+` (enter
//! left) or `-` (enter right), then `cost`.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use super::{Customer, Depots, Direction, TwoVrpInstance, TwoVrpSolution, Vehicle, Visit};
use crate::matrices::{parse_matrix_block, write_matrix};
use crate::matrices::AsymmetricCostMatrix;
use crate::{Error, Result};

fn content_lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn keyed<'a>(line: Option<(usize, &'a str)>, key: &str, count: usize) -> Result<(usize, Vec<&'a str>)> {
    let (lno, text) = line.ok_or_else(|| Error::parse(0, format!("missing `{key}` line")))?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some(key) {
        return Err(Error::parse(lno + 1, format!("expected `{key}`")));
    }
    let rest: Vec<&str> = toks.collect();
    if rest.len() != count {
        return Err(Error::parse(lno + 1, format!("`{key}` takes {count} values")));
    }
    Ok((lno, rest))
}

fn num<T: FromStr>(lno: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(lno + 1, format!("bad value {tok:?}")))
}

fn node(lno: usize, tok: &str) -> Result<usize> {
    let v: usize = num(lno, tok)?;
    v.checked_sub(1).ok_or_else(|| Error::parse(lno + 1, "node labels start at 1"))
}

impl FromStr for TwoVrpInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = content_lines(s).peekable();
        let (lno, v) = keyed(lines.next(), "customers", 1)?;
        let n: usize = num(lno, v[0])?;
        let (lno, v) = keyed(lines.next(), "capacity", 2)?;
        let capacity = [num(lno, v[0])?, num(lno, v[1])?];
        let (lno, v) = keyed(lines.next(), "depots", 4)?;
        let depots = Depots {
            start: [node(lno, v[0])?, node(lno, v[2])?],
            end: [node(lno, v[1])?, node(lno, v[3])?],
        };
        let mut allow_empty_first = false;
        if lines.peek().is_some_and(|(_, l)| l.trim_start().starts_with("allow_empty_first")) {
            let (lno, v) = keyed(lines.next(), "allow_empty_first", 1)?;
            allow_empty_first = num::<u8>(lno, v[0])? != 0;
        }
        let mut customers = Vec::with_capacity(n);
        for _ in 0..n {
            let (lno, text) = lines.next().ok_or_else(|| Error::parse(0, "customer table too short"))?;
            let t: Vec<&str> = text.split_whitespace().collect();
            if t.len() != 8 {
                return Err(Error::parse(lno + 1, "customer rows have 8 fields"));
            }
            let fixed_to = match t[7] {
                "-" => None,
                "1" => Some(Vehicle::First),
                "2" => Some(Vehicle::Second),
                other => return Err(Error::parse(lno + 1, format!("bad fixed vehicle {other:?}"))),
            };
            customers.push(Customer {
                left: node(lno, t[0])?,
                right: node(lno, t[1])?,
                internal: [[num(lno, t[2])?, num(lno, t[3])?], [num(lno, t[4])?, num(lno, t[5])?]],
                demand: num(lno, t[6])?,
                fixed_to,
            });
        }
        let (n1, d1) = parse_matrix_block(&mut lines)?;
        let (n2, d2) = parse_matrix_block(&mut lines)?;
        let costs = [AsymmetricCostMatrix::new(n1, d1)?, AsymmetricCostMatrix::new(n2, d2)?];
        let inst = TwoVrpInstance { customers, depots, capacity, costs: Arc::new(costs), allow_empty_first };
        inst.validate()?;
        Ok(inst)
    }
}

impl TwoVrpInstance {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let d = self.depots;
        let _ = writeln!(s, "customers {}", self.n());
        let _ = writeln!(s, "capacity {} {}", self.capacity[0], self.capacity[1]);
        let _ = writeln!(s, "depots {} {} {} {}", d.start[0] + 1, d.end[0] + 1, d.start[1] + 1, d.end[1] + 1);
        let _ = writeln!(s, "allow_empty_first {}", u8::from(self.allow_empty_first));
        for c in &self.customers {
            let fixed = match c.fixed_to {
                None => "-",
                Some(Vehicle::First) => "1",
                Some(Vehicle::Second) => "2",
            };
            let [[a, b], [e, f]] = c.internal;
            let _ = writeln!(s, "{} {} {a} {b} {e} {f} {} {fixed}", c.left + 1, c.right + 1, c.demand);
        }
        let mut buf = Vec::new();
        for m in 0..2 {
            write_matrix(&mut buf, &self.costs[m]).expect("writing to memory");
        }
        s.push_str(std::str::from_utf8(&buf).expect("ascii"));
        s
    }
}

pub fn solution_to_text(sol: &TwoVrpSolution) -> String {
    let mut s = String::new();
    for m in 0..2 {
        let _ = write!(s, "route{}", m + 1);
        for v in &sol.routes[m] {
            let sign = if v.direction == Direction::Forward { '+' } else { '-' };
            let _ = write!(s, " {}{sign}", v.customer + 1);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "cost {}", sol.cost);
    s
}

/// Parses a solution; loads and cost are recomputed against `inst`.
pub fn parse_solution(inst: &TwoVrpInstance, s: &str) -> Result<TwoVrpSolution> {
    let mut routes: [Vec<Visit>; 2] = Default::default();
    let mut lines = content_lines(s);
    for (m, route) in routes.iter_mut().enumerate() {
        let key = format!("route{}", m + 1);
        let (lno, text) = lines.next().ok_or_else(|| Error::parse(0, format!("missing `{key}`")))?;
        let mut toks = text.split_whitespace();
        if toks.next() != Some(key.as_str()) {
            return Err(Error::parse(lno + 1, format!("expected `{key}`")));
        }
        for tok in toks {
            let (label, dir) = match tok.strip_suffix('+') {
                Some(l) => (l, Direction::Forward),
                None => match tok.strip_suffix('-') {
                    Some(l) => (l, Direction::Backward),
                    None => return Err(Error::parse(lno + 1, format!("{tok:?} lacks + or -"))),
                },
            };
            route.push(Visit::new(node(lno, label)?, dir));
        }
    }
    let [r1, r2] = routes;
    Ok(inst.solution_from_routes(r1, r2))
}
