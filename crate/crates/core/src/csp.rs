//! Weight-k Boolean constraint optimization.
//!
//! An instance is a multiset of constraints, each a registered
//! [`BooleanFunction`] applied to distinct variables. A weight-k assignment
//! sets exactly `k` variables to 1.
//!
//! # Text format
//!
//! ```text
//! csp vars=4 k=2
//! fn and2 arity=2 tt=0001
//! ct and2 0 1
//! ct and2 2 3
//! ```

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use itertools::Itertools;
use rayon::prelude::*;

use crate::boolean::{BooleanFunction, MultilinearPolynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Max,
    Min,
}

impl Objective {
    /// Whether `a` is strictly preferable to `b`.
    pub fn better(self, a: i64, b: i64) -> bool {
        match self {
            Objective::Max => a > b,
            Objective::Min => a < b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub function: usize,
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    n_vars: usize,
    functions: Vec<(String, BooleanFunction)>,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    pub fn new(n_vars: usize) -> Self {
        CspInstance {
            n_vars,
            functions: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Number of constraints `m`, counted with multiplicity.
    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn functions(&self) -> &[(String, BooleanFunction)] {
        &self.functions
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn function(&self, id: usize) -> &BooleanFunction {
        &self.functions[id].1
    }

    pub fn function_id(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|(n, _)| n == name)
    }

    /// Registers `f` under `name`; re-registering the same pair is a no-op.
    pub fn register(&mut self, name: &str, f: BooleanFunction) -> Result<usize> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::precondition(format!(
                "invalid function name `{name}`"
            )));
        }
        match self.function_id(name) {
            Some(id) if self.functions[id].1 == f => Ok(id),
            Some(_) => Err(Error::precondition(format!(
                "function `{name}` registered twice"
            ))),
            None => {
                self.functions.push((name.to_string(), f));
                Ok(self.functions.len() - 1)
            }
        }
    }

    pub fn add_constraint(&mut self, function: usize, vars: Vec<usize>) -> Result<()> {
        let (name, f) = self
            .functions
            .get(function)
            .ok_or_else(|| Error::precondition(format!("unknown function id {function}")))?;
        if vars.len() != f.arity() {
            return Err(Error::precondition(format!(
                "`{name}` has arity {} but got {} variables",
                f.arity(),
                vars.len()
            )));
        }
        if let Some(&v) = vars.iter().find(|&&v| v >= self.n_vars) {
            return Err(Error::precondition(format!(
                "variable {v} out of range (n = {})",
                self.n_vars
            )));
        }
        if !vars.iter().all_unique() {
            return Err(Error::precondition(format!(
                "constraint `{name}` repeats a variable: {vars:?}"
            )));
        }
        self.constraints.push(Constraint { function, vars });
        Ok(())
    }

    pub fn add(&mut self, name: &str, vars: Vec<usize>) -> Result<()> {
        let id = self
            .function_id(name)
            .ok_or_else(|| Error::precondition(format!("unknown function `{name}`")))?;
        self.add_constraint(id, vars)
    }

    /// The same constraints with every function complemented.
    pub fn negated(&self) -> Self {
        CspInstance {
            n_vars: self.n_vars,
            functions: self
                .functions
                .iter()
                .map(|(n, f)| (n.clone(), f.negate()))
                .collect(),
            constraints: self.constraints.clone(),
        }
    }

    /// Largest degree among the functions used by some constraint.
    pub fn degree(&self) -> usize {
        self.constraints
            .iter()
            .map(|c| c.function)
            .unique()
            .map(|id| self.function(id).degree())
            .max()
            .unwrap_or(0)
    }

    /// `P_Φ = Σ_i f_i(vars_i)` over variable ids.
    pub fn polynomial(&self) -> MultilinearPolynomial {
        let polys: Vec<_> = self
            .functions
            .iter()
            .map(|(_, f)| f.characteristic_polynomial())
            .collect();
        let mut p = MultilinearPolynomial::zero();
        for c in &self.constraints {
            p.add_assign(&polys[c.function].rename(&c.vars));
        }
        p
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        match a.ones.last() {
            Some(&v) if v >= self.n_vars => Err(Error::precondition(format!(
                "variable {v} out of range (n = {})",
                self.n_vars
            ))),
            _ => Ok(()),
        }
    }
}

/// A 0/1 assignment, given by its set of ones.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    ones: Vec<usize>,
}

impl Assignment {
    pub fn new(ones: impl IntoIterator<Item = usize>) -> Self {
        let mut ones: Vec<_> = ones.into_iter().collect();
        ones.sort_unstable();
        ones.dedup();
        Assignment { ones }
    }

    pub fn ones(&self) -> &[usize] {
        &self.ones
    }

    pub fn weight(&self) -> usize {
        self.ones.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.ones.binary_search(&v).is_ok()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ones.iter().join(","))
    }
}

/// Number of satisfied constraints, by truth-table lookup.
pub fn evaluate_instance(phi: &CspInstance, a: &Assignment) -> Result<i64> {
    phi.check_assignment(a)?;
    Ok(phi
        .constraints
        .iter()
        .filter(|c| {
            let index = c
                .vars
                .iter()
                .enumerate()
                .map(|(j, &v)| usize::from(a.contains(v)) << j)
                .sum();
            phi.function(c.function).value_at(index)
        })
        .count() as i64)
}

/// `P_Φ(a)`, which equals [`evaluate_instance`].
pub fn evaluate_polynomial(phi: &CspInstance, a: &Assignment) -> Result<i64> {
    phi.check_assignment(a)?;
    Ok(phi.polynomial().evaluate_with(|v| a.contains(v)))
}

/// Constraints merged by variable set into one integer table per set.
/// `table[mask]` is the number of satisfied constraints on that set when
/// exactly the variables at the set bits of `mask` are 1.
struct Compiled {
    n_vars: usize,
    base: i64,
    tables: Vec<Vec<i64>>,
    /// For each variable, the (table, bit) pairs it appears in.
    incidence: Vec<Vec<(usize, u32)>>,
}

impl Compiled {
    fn new(phi: &CspInstance) -> Self {
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut tables: Vec<Vec<i64>> = Vec::new();
        let mut scopes: Vec<Vec<usize>> = Vec::new();
        for c in &phi.constraints {
            let scope: Vec<usize> = c.vars.iter().copied().sorted().collect();
            let id = *index.entry(scope.clone()).or_insert_with(|| {
                tables.push(vec![0; 1 << scope.len()]);
                scopes.push(scope.clone());
                tables.len() - 1
            });
            let f = phi.function(c.function);
            let positions: Vec<usize> = c
                .vars
                .iter()
                .map(|v| scope.binary_search(v).unwrap())
                .collect();
            for (mask, slot) in tables[id].iter_mut().enumerate() {
                let arg: usize = positions
                    .iter()
                    .enumerate()
                    .map(|(j, &pos)| (mask >> pos & 1) << j)
                    .sum();
                *slot += i64::from(f.value_at(arg));
            }
        }
        let mut incidence = vec![Vec::new(); phi.n_vars];
        for (id, scope) in scopes.iter().enumerate() {
            for (bit, &v) in scope.iter().enumerate() {
                incidence[v].push((id, bit as u32));
            }
        }
        let base = tables.iter().map(|t| t[0]).sum();
        Compiled {
            n_vars: phi.n_vars,
            base,
            tables,
            incidence,
        }
    }

    fn delta(&self, masks: &[u32], v: usize) -> i64 {
        self.incidence[v]
            .iter()
            .map(|&(id, bit)| {
                let m = masks[id] as usize;
                self.tables[id][m | 1 << bit] - self.tables[id][m]
            })
            .sum()
    }

    fn set(&self, masks: &mut [u32], v: usize, on: bool) {
        for &(id, bit) in &self.incidence[v] {
            if on {
                masks[id] |= 1 << bit;
            } else {
                masks[id] &= !(1 << bit);
            }
        }
    }

    /// Visits all k-subsets starting with `first` in lexicographic order.
    fn walk<T>(&self, k: usize, first: usize, acc: T, visit: &impl Fn(T, &[usize], i64) -> T) -> T {
        let mut masks = vec![0u32; self.tables.len()];
        let mut chosen = Vec::with_capacity(k);
        let value = self.base + self.delta(&masks, first);
        chosen.push(first);
        if k == 1 {
            return visit(acc, &chosen, value);
        }
        self.set(&mut masks, first, true);
        self.extend(k, &mut chosen, &mut masks, value, acc, visit)
    }

    fn extend<T>(
        &self,
        k: usize,
        chosen: &mut Vec<usize>,
        masks: &mut [u32],
        value: i64,
        mut acc: T,
        visit: &impl Fn(T, &[usize], i64) -> T,
    ) -> T {
        let start = chosen.last().map_or(0, |&v| v + 1);
        let remaining = k - chosen.len();
        for v in start..=self.n_vars - remaining {
            let next = value + self.delta(masks, v);
            chosen.push(v);
            if remaining == 1 {
                acc = visit(acc, chosen, next);
            } else {
                self.set(masks, v, true);
                acc = self.extend(k, chosen, masks, next, acc, visit);
                self.set(masks, v, false);
            }
            chosen.pop();
        }
        acc
    }
}

/// Folds over every weight-k assignment (sorted ones, value), in parallel
/// over the smallest variable. `fold` sees assignments of one chunk in
/// lexicographic order; `reduce` receives chunks in arbitrary grouping.
pub fn fold_weight_k<T, I, F, R>(
    phi: &CspInstance,
    k: usize,
    identity: I,
    fold: F,
    reduce: R,
) -> Result<T>
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, &[usize], i64) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    if k > phi.n_vars {
        return Err(Error::precondition(format!(
            "k = {k} exceeds the {} variables",
            phi.n_vars
        )));
    }
    let compiled = Compiled::new(phi);
    if k == 0 {
        return Ok(fold(identity(), &[], compiled.base));
    }
    Ok((0..=phi.n_vars - k)
        .into_par_iter()
        .map(|first| compiled.walk(k, first, identity(), &fold))
        .reduce(&identity, &reduce))
}

/// Exact optimum over all weight-k assignments; ties go to the
/// lexicographically smallest set of ones.
pub fn brute_force_optimum(
    phi: &CspInstance,
    k: usize,
    objective: Objective,
) -> Result<(i64, Assignment)> {
    let pick = |a: Option<(i64, Vec<usize>)>, b: Option<(i64, Vec<usize>)>| match (a, b) {
        (Some(a), Some(b)) => {
            if objective.better(b.0, a.0) || (b.0 == a.0 && b.1 < a.1) {
                Some(b)
            } else {
                Some(a)
            }
        }
        (a, b) => a.or(b),
    };
    let best = fold_weight_k(
        phi,
        k,
        || None,
        |acc: Option<(i64, Vec<usize>)>, ones, value| match acc {
            Some((best, _)) if !objective.better(value, best) => acc,
            _ => Some((value, ones.to_vec())),
        },
        pick,
    )?;
    let (value, ones) = best.expect("at least one weight-k assignment");
    Ok((value, Assignment { ones }))
}

/// `value=<v>` and `ones=<ids>` lines.
pub fn format_optimum(value: i64, a: &Assignment) -> String {
    format!("value={value}\nones={a}\n")
}

/// A CSP file: an instance with its target weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspDocument {
    pub instance: CspInstance,
    pub k: usize,
}

pub fn write_csp(phi: &CspInstance, k: usize) -> String {
    let mut out = format!("csp vars={} k={k}\n", phi.n_vars);
    for (name, f) in &phi.functions {
        writeln!(out, "fn {name} arity={} tt={}", f.arity(), f.to_tt()).unwrap();
    }
    for c in &phi.constraints {
        writeln!(
            out,
            "ct {} {}",
            phi.functions[c.function].0,
            c.vars.iter().join(" ")
        )
        .unwrap();
    }
    out
}

pub fn read_csp(path: impl AsRef<Path>) -> Result<CspDocument> {
    parse_csp(&std::fs::read_to_string(path)?)
}

fn field<'a>(line: usize, token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key)?.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=...`")))
}

fn number(line: usize, text: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| Error::parse(line, format!("`{text}` is not a non-negative integer")))
}

pub fn parse_csp(text: &str) -> Result<CspDocument> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("csp") {
        return Err(Error::parse(hl, "expected header `csp vars=<n> k=<k>`"));
    }
    let n_vars = number(hl, field(hl, tokens.next(), "vars")?)?;
    let k = number(hl, field(hl, tokens.next(), "k")?)?;
    if tokens.next().is_some() {
        return Err(Error::parse(hl, "trailing tokens in header"));
    }
    let mut instance = CspInstance::new(n_vars);
    for (line, text) in lines {
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some("fn") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::parse(line, "missing function name"))?;
                let arity = number(line, field(line, tokens.next(), "arity")?)?;
                let tt = field(line, tokens.next(), "tt")?;
                let f =
                    BooleanFunction::from_tt(tt).map_err(|e| Error::parse(line, e.to_string()))?;
                if f.arity() != arity {
                    return Err(Error::parse(
                        line,
                        format!("tt has arity {} but arity={arity}", f.arity()),
                    ));
                }
                if instance.function_id(name).is_some() {
                    return Err(Error::parse(
                        line,
                        format!("function `{name}` defined twice"),
                    ));
                }
                instance
                    .register(name, f)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
            }
            Some("ct") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| Error::parse(line, "missing function name"))?;
                let vars = tokens
                    .map(|t| number(line, t))
                    .collect::<Result<Vec<_>>>()?;
                instance
                    .add(name, vars)
                    .map_err(|e| Error::parse(line, e.to_string()))?;
            }
            _ => return Err(Error::parse(line, format!("unrecognized line `{text}`"))),
        }
    }
    Ok(CspDocument { instance, k })
}

/// Sum of `k_i k_j` over pairs `i < j`.
pub fn cross_pair_sum(profile: &[usize]) -> usize {
    profile
        .iter()
        .tuple_combinations()
        .map(|(a, b)| a * b)
        .sum()
}

/// Sum of `C(k_i, 2)`.
pub fn within_pair_sum(profile: &[usize]) -> usize {
    profile.iter().map(|&x| x * x.saturating_sub(1) / 2).sum()
}

/// All sequences of `parts` non-negative integers summing to `total`.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    (0..=total)
        .flat_map(|first| {
            weak_compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}
