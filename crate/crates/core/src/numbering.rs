//! Value domains and the numbering families.
//!
//! Numbering values live in `{0, 1, ..., p-1}`. Residues mod `p` (exponents
//! and radii) use the same integer representatives, so reading a residue off a
//! numbering is a plain lookup.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigraph::{Branch, MarkedSemiGraph};

/// An odd prime `p > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p > 2 && is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotAnOddPrime(p))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Odd primes up to and including `bound`.
    pub fn up_to(bound: u32) -> Vec<Prime> {
        (3..=bound).filter(|&n| is_prime(n)).map(Prime).collect()
    }

    fn check(self, m: u32) -> Result<()> {
        if m < self.0 {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                value: m,
                p: self.0,
            })
        }
    }

    /// Canonical representative of `x mod p`.
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    (2..)
        .take_while(|d| d * d <= n)
        .all(|d| !n.is_multiple_of(d))
}

/// The involution `0 -> 0`, `m -> p - m`.
pub fn inv(p: Prime, m: u32) -> Result<u32> {
    p.check(m)?;
    Ok(inv_unchecked(p.0, m))
}

#[inline]
pub(crate) fn inv_unchecked(p: u32, m: u32) -> u32 {
    if m == 0 {
        0
    } else {
        p - m
    }
}

/// The triangle and sum conditions on the three edge values at a vertex.
///
/// The one-sided form `|m2 - m3| <= m1 <= m2 + m3` already implies the other
/// two triangle inequalities, so the result does not depend on the order.
pub fn satisfies_star(p: u32, [m1, m2, m3]: [u32; 3]) -> bool {
    m2.abs_diff(m3) <= m1 && m1 <= m2 + m3 && m1 + m2 + m3 + 2 <= p
}

/// Which of the two numbering families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Balanced,
    Strict,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Balanced => "balanced",
            Kind::Strict => "strict",
        })
    }
}

/// Values read at the marked legs in label order; empty when `r = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    /// Reduces arbitrary integers mod `p`.
    pub fn from_integers(p: Prime, xs: &[i64]) -> Self {
        ExponentVector(xs.iter().map(|&x| p.reduce(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[inline]
pub(crate) fn branch_slot(b: Branch) -> usize {
    2 * b.edge + b.slot as usize
}

/// A value per branch, with partner values exchanged by [`inv`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BranchNumbering {
    p: Prime,
    values: Vec<u32>,
}

impl BranchNumbering {
    /// `values[2 * e + s]` is the value of branch `(e, s)`.
    pub fn new(m: &MarkedSemiGraph, p: Prime, values: Vec<u32>) -> Result<Self> {
        let expected = 2 * m.graph().edges().len();
        if values.len() != expected {
            return Err(Error::NumberingShape(format!(
                "expected {expected} branch values, got {}",
                values.len()
            )));
        }
        for &x in &values {
            p.check(x)?;
        }
        if let Some(e) =
            (0..expected / 2).find(|&e| values[2 * e + 1] != inv_unchecked(p.0, values[2 * e]))
        {
            return Err(Error::NumberingShape(format!(
                "branches of edge `{}` carry {} and {}, which are not exchanged by the involution",
                m.graph().edges()[e].id,
                values[2 * e],
                values[2 * e + 1]
            )));
        }
        Ok(BranchNumbering { p, values })
    }

    /// Builds the numbering whose slot-0 branch of edge `e` carries `slot0[e]`.
    pub fn from_slot0(m: &MarkedSemiGraph, p: Prime, slot0: &[u32]) -> Result<Self> {
        let values = slot0
            .iter()
            .flat_map(|&x| [x, inv_unchecked(p.0, x % p.0)])
            .collect();
        Self::new(m, p, values)
    }

    pub(crate) fn from_raw(p: Prime, values: Vec<u32>) -> Self {
        BranchNumbering { p, values }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn value(&self, b: Branch) -> u32 {
        self.values[branch_slot(b)]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

/// A value per edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeNumbering {
    p: Prime,
    values: Vec<u32>,
}

impl EdgeNumbering {
    pub fn new(m: &MarkedSemiGraph, p: Prime, values: Vec<u32>) -> Result<Self> {
        let expected = m.graph().edges().len();
        if values.len() != expected {
            return Err(Error::NumberingShape(format!(
                "expected {expected} edge values, got {}",
                values.len()
            )));
        }
        for &x in &values {
            p.check(x)?;
        }
        Ok(EdgeNumbering { p, values })
    }

    pub(crate) fn from_raw(p: Prime, values: Vec<u32>) -> Self {
        EdgeNumbering { p, values }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn value(&self, edge: usize) -> u32 {
        self.values[edge]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

/// Whether a raw per-branch assignment (indexed `2 * edge + slot`) is a
/// branch numbering: in range, total, and exchanged by the involution on
/// every edge.
pub fn is_branch_numbering(m: &MarkedSemiGraph, p: Prime, values: &[u32]) -> bool {
    values.len() == 2 * m.graph().edges().len()
        && values.iter().all(|&x| x < p.0)
        && values
            .chunks_exact(2)
            .all(|pair| pair[1] == inv_unchecked(p.0, pair[0]))
}

/// The three values at each vertex, read through `value`. Only meaningful on
/// 3-regular graphs; other vertices are skipped.
fn vertex_triples<'a>(
    m: &'a MarkedSemiGraph,
    value: impl Fn(Branch) -> u32 + 'a,
) -> impl Iterator<Item = [u32; 3]> + 'a {
    let g = m.graph();
    (0..g.vertices().len()).filter_map(move |v| match g.branches_at(v) {
        [a, b, c] => Some([value(*a), value(*b), value(*c)]),
        _ => None,
    })
}

/// Whether `a` satisfies the triangle and sum conditions at every vertex. A
/// self-loop contributes its edge value twice.
pub fn is_balanced(m: &MarkedSemiGraph, a: &EdgeNumbering) -> bool {
    let p = a.p.0;
    let g = m.graph();
    a.values.len() == g.edges().len()
        && (0..g.vertices().len()).all(|v| g.degree(v) == 3)
        && vertex_triples(m, |b| a.values[b.edge]).all(|t| satisfies_star(p, t))
}

/// Whether `a` is nonzero everywhere and sums to `p + 1` at every vertex.
pub fn is_strict(m: &MarkedSemiGraph, a: &BranchNumbering) -> bool {
    let p = a.p.0;
    let g = m.graph();
    a.values.len() == 2 * g.edges().len()
        && a.values.iter().all(|&x| x != 0)
        && (0..g.vertices().len()).all(|v| g.degree(v) == 3)
        && vertex_triples(m, |b| a.value(b)).all(|t| t.iter().sum::<u32>() == p + 1)
}

/// Values on the marked (open-side) branches in label order.
pub fn exponent_of(m: &MarkedSemiGraph, a: &BranchNumbering) -> ExponentVector {
    ExponentVector(m.marking().iter().map(|&b| a.value(b)).collect())
}

/// Values on the marked legs in label order.
pub fn radii_of(m: &MarkedSemiGraph, a: &EdgeNumbering) -> ExponentVector {
    ExponentVector(m.marking().iter().map(|b| a.values[b.edge]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::*;
    use proptest::prelude::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn prime_rejects_two_and_composites() {
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert_eq!(Prime::new(13).unwrap().get(), 13);
        let small: Vec<u32> = Prime::up_to(31).into_iter().map(Prime::get).collect();
        assert_eq!(small, vec![3, 5, 7, 11, 13, 17, 19, 23, 29, 31]);
    }

    #[test]
    fn inv_examples() {
        assert_eq!(inv(p(5), 0).unwrap(), 0);
        assert_eq!(inv(p(5), 2).unwrap(), 3);
        assert_eq!(inv(p(11), 10).unwrap(), 1);
        assert!(matches!(inv(p(5), 5), Err(Error::OutOfRange { .. })));
    }

    proptest! {
        #[test]
        fn inv_is_an_involution_negating_residues(idx in 0usize..6, m in 0u32..31) {
            let p = [3u32, 5, 7, 11, 13, 31][idx];
            let m = m % p;
            let pr = Prime::new(p).unwrap();
            let i = inv(pr, m).unwrap();
            prop_assert_eq!(inv(pr, i).unwrap(), m);
            prop_assert_eq!((i + m) % p, 0);
            prop_assert_eq!(i, pr.reduce(-(m as i64)));
        }

        #[test]
        fn star_is_symmetric(a in 0u32..13, b in 0u32..13, c in 0u32..13) {
            let s = satisfies_star(13, [a, b, c]);
            for perm in [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                prop_assert_eq!(satisfies_star(13, perm), s);
            }
        }
    }

    #[test]
    fn branch_numbering_predicate() {
        let t = tripod();
        // Edges are legs with slot 0 at the vertex.
        assert!(is_branch_numbering(&t, p(11), &[1, 10, 2, 9, 9, 2]));
        assert!(is_branch_numbering(&t, p(5), &[0; 6]));
        assert!(!is_branch_numbering(&t, p(5), &[1, 1, 0, 0, 0, 0]));
        assert!(!is_branch_numbering(&t, p(5), &[0; 4]));
        assert!(BranchNumbering::new(&t, p(5), vec![1, 1, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn balanced_predicate() {
        let t = tripod();
        let e = |v: Vec<u32>, q| EdgeNumbering::new(&t, p(q), v).unwrap();
        assert!(is_balanced(&t, &e(vec![1, 1, 1], 5)));
        assert!(is_balanced(&t, &e(vec![0, 0, 0], 5)));
        assert!(is_balanced(&t, &e(vec![0, 0, 0], 3)));
        assert!(!is_balanced(&t, &e(vec![1, 1, 2], 5)));
        assert!(!is_balanced(&t, &e(vec![3, 0, 1], 11)));
    }

    #[test]
    fn balanced_counts_a_self_loop_twice() {
        let g = loop_with_leg();
        // loop value 2 counted twice with leg 0: (2, 2, 0) sums to 4 <= 5
        assert!(is_balanced(
            &g,
            &EdgeNumbering::new(&g, p(7), vec![2, 0]).unwrap()
        ));
        // (3, 3, 0) sums to 6 > 5
        assert!(!is_balanced(
            &g,
            &EdgeNumbering::new(&g, p(7), vec![3, 0]).unwrap()
        ));
        // (1, 1, 3) breaks the triangle
        assert!(!is_balanced(
            &g,
            &EdgeNumbering::new(&g, p(11), vec![1, 3]).unwrap()
        ));
    }

    #[test]
    fn strict_predicate() {
        let t = tripod();
        let a = BranchNumbering::new(&t, p(11), vec![1, 10, 2, 9, 9, 2]).unwrap();
        assert!(is_strict(&t, &a));
        let z = BranchNumbering::new(&t, p(5), vec![0, 0, 2, 3, 4, 1]).unwrap();
        assert!(!is_strict(&t, &z));

        let g = loop_with_leg();
        for a in 1..7 {
            let n = BranchNumbering::new(&g, p(7), vec![a, 7 - a, 1, 6]).unwrap();
            assert!(is_strict(&g, &n), "a = {a}");
            assert_eq!(exponent_of(&g, &n), ExponentVector(vec![6]));
        }
    }

    #[test]
    fn strict_rejects_irregular_graph() {
        use crate::semigraph::SemiGraph;
        let g = SemiGraph::new(
            ["v"],
            vec![(
                "e".to_string(),
                [Some("v".to_string()), Some("v".to_string())],
            )],
        )
        .unwrap();
        let m = MarkedSemiGraph::new(g, &[] as &[&str]).unwrap();
        let a = BranchNumbering::new(&m, p(3), vec![1, 2]).unwrap();
        assert!(!is_strict(&m, &a));
    }

    #[test]
    fn exponent_and_radii_lookup() {
        let t = tripod();
        let a = BranchNumbering::new(&t, p(11), vec![1, 10, 2, 9, 9, 2]).unwrap();
        assert_eq!(exponent_of(&t, &a), ExponentVector(vec![10, 9, 2]));
        let e = EdgeNumbering::new(&t, p(5), vec![1, 1, 1]).unwrap();
        assert_eq!(radii_of(&t, &e), ExponentVector(vec![1, 1, 1]));
        let th = theta();
        let zero = EdgeNumbering::new(&th, p(5), vec![0, 0, 0]).unwrap();
        assert!(radii_of(&th, &zero).is_empty());
        let zb = BranchNumbering::new(&th, p(5), vec![0; 6]).unwrap();
        assert_eq!(exponent_of(&th, &zb).to_string(), "∅");
    }

    #[test]
    fn reduce_handles_negatives() {
        assert_eq!(
            ExponentVector::from_integers(p(7), &[-1, 9, 0]).0,
            vec![6, 2, 0]
        );
    }
}
