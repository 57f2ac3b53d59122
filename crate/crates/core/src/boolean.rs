//! Boolean functions and their multilinear polynomials over the integers.
//!
//! Truth tables are indexed so that argument `j` is bit `j` of the index:
//! entry `t` is the value at `(bit 0 of t, bit 1 of t, ...)`. The textual
//! form lists entries `t = 0, 1, 2, ...` left to right, so AND₂ is `0001`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// The six permutations of three arguments, in lexicographic order.
pub const S3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Largest accepted arity.
pub const MAX_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunction {
    arity: usize,
    table: Vec<bool>,
}

impl BooleanFunction {
    pub fn from_table(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::precondition(format!(
                "arity {arity} outside 1..={MAX_ARITY}"
            )));
        }
        if table.len() != 1 << arity {
            return Err(Error::precondition(format!(
                "truth table of arity {arity} needs {} entries, got {}",
                1usize << arity,
                table.len()
            )));
        }
        Ok(BooleanFunction { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let table = (0..1usize << arity)
            .map(|t| f(&(0..arity).map(|j| t >> j & 1 == 1).collect::<Vec<_>>()))
            .collect();
        Self::from_table(arity, table).expect("arity in range")
    }

    /// Parses a `0`/`1` string whose length is a power of two, at least 2.
    pub fn from_tt(bits: &str) -> Result<Self> {
        let table = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::precondition(format!(
                    "truth table `{bits}` contains `{c}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if table.len() < 2 || !table.len().is_power_of_two() {
            return Err(Error::precondition(format!(
                "truth table length {} is not a power of two >= 2",
                table.len()
            )));
        }
        Self::from_table(table.len().trailing_zeros() as usize, table)
    }

    pub fn to_tt(&self) -> String {
        self.table
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn value_at(&self, index: usize) -> bool {
        self.table[index]
    }

    pub fn evaluate(&self, args: &[bool]) -> bool {
        assert_eq!(args.len(), self.arity, "argument count");
        let index: usize = args
            .iter()
            .enumerate()
            .map(|(j, &b)| usize::from(b) << j)
            .sum();
        self.table[index]
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        Self::from_fn(arity, |_| value)
    }

    /// The single-variable function `x`.
    pub fn identity() -> Self {
        Self::from_fn(1, |x| x[0])
    }

    pub fn and(arity: usize) -> Self {
        Self::from_fn(arity, |x| x.iter().all(|&b| b))
    }

    pub fn or(arity: usize) -> Self {
        Self::from_fn(arity, |x| x.iter().any(|&b| b))
    }

    pub fn xor(arity: usize) -> Self {
        Self::from_fn(arity, |x| x.iter().filter(|&&b| b).count() % 2 == 1)
    }

    pub fn maj3() -> Self {
        Self::from_fn(3, |x| x.iter().filter(|&&b| b).count() >= 2)
    }

    /// True unless all three arguments are equal.
    pub fn nae3() -> Self {
        Self::from_fn(3, |x| !(x[0] == x[1] && x[1] == x[2]))
    }

    pub fn all_equal3() -> Self {
        Self::nae3().negate()
    }

    /// True iff `x1 x2 x3 x4` is sorted ascending or descending.
    pub fn sort4() -> Self {
        Self::from_fn(4, |x| {
            x.windows(2).all(|w| w[0] <= w[1]) || x.windows(2).all(|w| w[0] >= w[1])
        })
    }

    /// Bitwise complement of the truth table.
    pub fn negate(&self) -> Self {
        BooleanFunction {
            arity: self.arity,
            table: self.table.iter().map(|b| !b).collect(),
        }
    }

    /// `x ↦ f(x[perm[0]], ..., x[perm[r-1]])`.
    pub fn permute_arguments(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.arity);
        Self::from_fn(self.arity, |x| {
            self.evaluate(&perm.iter().map(|&p| x[p]).collect::<Vec<_>>())
        })
    }

    pub fn characteristic_polynomial(&self) -> MultilinearPolynomial {
        characteristic_polynomial(self)
    }

    pub fn degree(&self) -> usize {
        characteristic_polynomial(self).degree()
    }
}

impl fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tt())
    }
}

/// Integer polynomial, multilinear in variables `0, 1, ...`. Monomials are
/// sorted variable lists; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MultilinearPolynomial {
    coeffs: BTreeMap<Vec<usize>, i64>,
}

impl MultilinearPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coefficient(&self, monomial: &[usize]) -> i64 {
        self.coeffs.get(monomial).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], i64)> {
        self.coeffs.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `c` to the coefficient of `monomial` (any variable order).
    pub fn add_term(&mut self, mut monomial: Vec<usize>, c: i64) {
        monomial.sort_unstable();
        debug_assert!(
            monomial.windows(2).all(|w| w[0] < w[1]),
            "multilinear monomial"
        );
        match self.coeffs.entry(monomial) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if c != 0 {
                    v.insert(c);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in other.terms() {
            self.add_term(m.to_vec(), c);
        }
    }

    /// Substitutes variable `j` by `vars[j]`. The images must be distinct.
    pub fn rename(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            out.add_term(m.iter().map(|&j| vars[j]).collect(), c);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Value at the 0/1 point given by `is_one`.
    pub fn evaluate_with(&self, is_one: impl Fn(usize) -> bool) -> i64 {
        self.terms()
            .filter(|(m, _)| m.iter().all(|&v| is_one(v)))
            .map(|(_, c)| c)
            .sum()
    }

    pub fn evaluate(&self, point: &[bool]) -> i64 {
        self.evaluate_with(|v| point[v])
    }
}

impl fmt::Display for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self
            .coeffs
            .iter()
            .sorted_by_key(|(m, _)| (m.len(), *m))
            .enumerate()
        {
            match (i, *c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.unsigned_abs();
            let vars = m.iter().map(|v| format!("x{v}")).join("*");
            match (mag, vars.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => f.write_str(&vars)?,
                _ => write!(f, "{mag}*{vars}")?,
            }
        }
        Ok(())
    }
}

/// Möbius inversion over the subset lattice:
/// `c_V = Σ_{U ⊆ V} (-1)^{|V|-|U|} φ(1_U)`.
pub fn characteristic_polynomial(phi: &BooleanFunction) -> MultilinearPolynomial {
    let mut a: Vec<i64> = phi.table.iter().map(|&b| i64::from(b)).collect();
    for j in 0..phi.arity {
        let bit = 1 << j;
        for mask in 0..a.len() {
            if mask & bit != 0 {
                a[mask] -= a[mask ^ bit];
            }
        }
    }
    let coeffs = a
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .map(|(mask, c)| ((0..phi.arity).filter(|j| mask >> j & 1 == 1).collect(), c))
        .collect();
    MultilinearPolynomial { coeffs }
}

pub fn degree(phi: &BooleanFunction) -> usize {
    phi.degree()
}

/// `f_sym = α·xyz + β(xy + xz + yz) + γ(x + y + z) + δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymmetricCoefficients {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl SymmetricCoefficients {
    pub fn evaluate(&self, x: bool, y: bool, z: bool) -> i64 {
        let (x, y, z) = (i64::from(x), i64::from(y), i64::from(z));
        self.alpha * x * y * z
            + self.beta * (x * y + x * z + y * z)
            + self.gamma * (x + y + z)
            + self.delta
    }
}

/// The six argument permutations of a ternary function and the
/// coefficients of their summed polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetrization {
    /// `permuted[i]` is `φ` with arguments reordered by `S3[i]`.
    pub permuted: Vec<BooleanFunction>,
    pub coefficients: SymmetricCoefficients,
}

pub fn symmetrize(phi: &BooleanFunction) -> Result<Symmetrization> {
    if phi.arity != 3 {
        return Err(Error::precondition(format!(
            "symmetrize needs arity 3, got {}",
            phi.arity
        )));
    }
    let permuted: Vec<_> = S3.iter().map(|p| phi.permute_arguments(p)).collect();
    let mut sum = MultilinearPolynomial::zero();
    for f in &permuted {
        sum.add_assign(&f.characteristic_polynomial());
    }
    let coefficients = SymmetricCoefficients {
        alpha: sum.coefficient(&[0, 1, 2]),
        beta: sum.coefficient(&[0, 1]),
        gamma: sum.coefficient(&[0]),
        delta: sum.coefficient(&[]),
    };
    Ok(Symmetrization {
        permuted,
        coefficients,
    })
}

/// A ternary function obtained from `φ` by identifying arguments `3..r`
/// with `x_0, x_1, x_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryReduction {
    /// `substitution[j]` is the argument that replaces argument `j + 3`.
    pub substitution: Vec<usize>,
    pub function: BooleanFunction,
}

/// Searches the `3^(r-3)` identifications in lexicographic order and returns
/// the first whose result still has degree 3.
pub fn reduce_to_ternary(phi: &BooleanFunction) -> Result<TernaryReduction> {
    let d = phi.degree();
    if d < 3 {
        return Err(Error::precondition(format!(
            "reduce_to_ternary needs degree >= 3, got {d}"
        )));
    }
    let extra = phi.arity - 3;
    if extra == 0 {
        return Ok(TernaryReduction {
            substitution: Vec::new(),
            function: phi.clone(),
        });
    }
    let mut searched = 0;
    for substitution in (0..extra).map(|_| 0..3).multi_cartesian_product() {
        searched += 1;
        let function = BooleanFunction::from_fn(3, |x| {
            let full: Vec<bool> = x
                .iter()
                .copied()
                .chain(substitution.iter().map(|&s| x[s]))
                .collect();
            phi.evaluate(&full)
        });
        if function.degree() == 3 {
            return Ok(TernaryReduction {
                substitution,
                function,
            });
        }
    }
    Err(Error::NoDegreePreservingSubstitution { searched })
}

pub fn negate(phi: &BooleanFunction) -> BooleanFunction {
    phi.negate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(&[usize], i64)]) -> MultilinearPolynomial {
        let mut p = MultilinearPolynomial::zero();
        for (m, c) in terms {
            p.add_term(m.to_vec(), *c);
        }
        p
    }

    #[test]
    fn known_polynomials() {
        assert_eq!(
            BooleanFunction::or(3).characteristic_polynomial(),
            poly(&[
                (&[0], 1),
                (&[1], 1),
                (&[2], 1),
                (&[0, 1], -1),
                (&[0, 2], -1),
                (&[1, 2], -1),
                (&[0, 1, 2], 1)
            ])
        );
        assert_eq!(
            BooleanFunction::and(2).characteristic_polynomial(),
            poly(&[(&[0, 1], 1)])
        );
        let xor = BooleanFunction::xor(2).characteristic_polynomial();
        assert_eq!(xor, poly(&[(&[0], 1), (&[1], 1), (&[0, 1], -2)]));
        assert_eq!(xor.to_string(), "x0 + x1 - 2*x0*x1");
    }

    #[test]
    fn degrees() {
        assert_eq!(BooleanFunction::and(3).degree(), 3);
        assert_eq!(BooleanFunction::nae3().degree(), 2);
        assert_eq!(BooleanFunction::all_equal3().degree(), 2);
        assert_eq!(BooleanFunction::sort4().degree(), 2);
        assert_eq!(BooleanFunction::constant(3, false).degree(), 0);
        assert_eq!(BooleanFunction::xor(4).degree(), 4);
    }

    #[test]
    fn symmetric_coefficients() {
        let c = |f: BooleanFunction| {
            let s = symmetrize(&f).unwrap().coefficients;
            (s.alpha, s.beta, s.gamma, s.delta)
        };
        assert_eq!(c(BooleanFunction::and(3)), (6, 0, 0, 0));
        assert_eq!(c(BooleanFunction::maj3()), (-12, 6, 0, 0));
        assert_eq!(c(BooleanFunction::or(3)), (6, -6, 6, 0));
        assert!(symmetrize(&BooleanFunction::and(2)).is_err());
    }

    #[test]
    fn symmetrization_sums_permuted_values() {
        for bits in 0u32..256 {
            let f = BooleanFunction::from_fn(3, |x| {
                bits >> (usize::from(x[0]) | usize::from(x[1]) << 1 | usize::from(x[2]) << 2) & 1
                    == 1
            });
            let s = symmetrize(&f).unwrap();
            for t in 0..8 {
                let x = [t & 1 == 1, t & 2 == 2, t & 4 == 4];
                let direct: i64 = s.permuted.iter().map(|g| i64::from(g.evaluate(&x))).sum();
                assert_eq!(s.coefficients.evaluate(x[0], x[1], x[2]), direct);
            }
            assert_eq!(s.coefficients.alpha != 0, f.degree() == 3);
        }
    }

    #[test]
    fn tt_strings() {
        assert_eq!(BooleanFunction::and(2).to_tt(), "0001");
        assert_eq!(BooleanFunction::and(2).negate().to_tt(), "1110");
        assert_eq!(
            BooleanFunction::from_tt("0110").unwrap(),
            BooleanFunction::xor(2)
        );
        assert_eq!(BooleanFunction::maj3().to_tt(), "00010111");
        assert!(BooleanFunction::from_tt("011").is_err());
        assert!(BooleanFunction::from_tt("0").is_err());
        assert!(BooleanFunction::from_tt("01x1").is_err());
        let f = BooleanFunction::from_tt("0010").unwrap();
        assert!(f.evaluate(&[false, true]) && !f.evaluate(&[true, false]));
    }

    #[test]
    fn ternary_reduction() {
        let r = reduce_to_ternary(&BooleanFunction::and(4)).unwrap();
        assert_eq!(r.substitution, vec![0]);
        assert_eq!(r.function, BooleanFunction::and(3));
        let r = reduce_to_ternary(&BooleanFunction::maj3()).unwrap();
        assert_eq!(r.function, BooleanFunction::maj3());
        assert!(r.substitution.is_empty());
        assert!(matches!(
            reduce_to_ternary(&BooleanFunction::sort4()),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            reduce_to_ternary(&BooleanFunction::xor(4)),
            Err(Error::NoDegreePreservingSubstitution { searched: 3 })
        ));
    }

    #[test]
    fn negate_is_an_involution() {
        let f = BooleanFunction::sort4();
        assert_eq!(f.negate().negate(), f);
    }
}
