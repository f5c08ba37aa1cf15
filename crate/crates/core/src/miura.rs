//! The combinatorial Miura map from strict branch numberings to balanced edge
//! numberings, and the tripod dictionary behind it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbering::{
    exponent_of, inv_unchecked, is_strict, satisfies_star, BranchNumbering, EdgeNumbering,
    ExponentVector, Prime,
};
use crate::semigraph::{Branch, MarkedSemiGraph};

/// `(p - m - 1) / 2` for even `m`, `(m - 1) / 2` for odd `m`.
pub fn mu_value(p: Prime, m: u32) -> Result<u32> {
    if m >= p.get() {
        return Err(Error::OutOfRange {
            value: m,
            p: p.get(),
        });
    }
    Ok(mu_unchecked(p.get(), m))
}

#[inline]
pub(crate) fn mu_unchecked(p: u32, m: u32) -> u32 {
    if m.is_multiple_of(2) {
        (p - m - 1) / 2
    } else {
        (m - 1) / 2
    }
}

/// Componentwise image of an exponent vector.
pub fn mu_exponent(p: Prime, e: &ExponentVector) -> ExponentVector {
    ExponentVector(
        e.entries()
            .iter()
            .map(|&m| mu_unchecked(p.get(), m))
            .collect(),
    )
}

/// A balanced numbering produced by [`miura_transform`], with the radii it
/// carries on the marked legs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiuraImage {
    pub numbering: EdgeNumbering,
    pub radii: ExponentVector,
}

/// Applies the Miura map to a strict numbering.
///
/// Both branches of every edge are mapped and must agree; a disagreement is
/// reported as an error instead of picking a side.
pub fn miura_transform(m: &MarkedSemiGraph, a: &BranchNumbering) -> Result<MiuraImage> {
    if !is_strict(m, a) {
        return Err(Error::NotStrict(describe_non_strict(m, a)));
    }
    let p = a.p();
    let mut values = Vec::with_capacity(m.graph().edges().len());
    for (e, edge) in m.graph().edges().iter().enumerate() {
        let x0 = mu_unchecked(p.get(), a.value(Branch::new(e, 0)));
        let x1 = mu_unchecked(p.get(), a.value(Branch::new(e, 1)));
        if x0 != x1 {
            return Err(Error::NumberingShape(format!(
                "branches of edge `{}` map to {x0} and {x1}",
                edge.id
            )));
        }
        values.push(x0);
    }
    let numbering = EdgeNumbering::from_raw(p, values);
    let radii = crate::numbering::radii_of(m, &numbering);
    Ok(MiuraImage { numbering, radii })
}

/// The expected radii of the image of a numbering with exponent `exponent_of(a)`.
pub fn expected_radii(m: &MarkedSemiGraph, a: &BranchNumbering) -> ExponentVector {
    mu_exponent(a.p(), &exponent_of(m, a))
}

fn describe_non_strict(m: &MarkedSemiGraph, a: &BranchNumbering) -> String {
    let g = m.graph();
    if let Some((e, s)) = (0..g.edges().len())
        .flat_map(|e| [(e, 0u8), (e, 1u8)])
        .find(|&(e, s)| a.value(Branch::new(e, s)) == 0)
    {
        return format!("branch `{}.{s}` is 0", g.edges()[e].id);
    }
    for v in 0..g.vertices().len() {
        let bs = g.branches_at(v);
        if bs.len() != 3 {
            return format!("vertex `{}` has degree {}", g.vertices()[v], bs.len());
        }
        let sum: u32 = bs.iter().map(|&b| a.value(b)).sum();
        if sum != a.p().get() + 1 {
            return format!(
                "values at vertex `{}` sum to {sum}, not {}",
                g.vertices()[v],
                a.p().get() + 1
            );
        }
    }
    "value count does not match the graph".into()
}

/// A tripod branch numbering, identified with the values on the three
/// vertex-side branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripodTriple {
    pub values: [u32; 3],
    pub strict: bool,
}

/// All triples in `{0..p-1}^3` whose sum is `1 mod p`, in lexicographic order,
/// flagged strict when all entries are nonzero and the sum is exactly `p + 1`.
pub fn tripod_strict_set(p: Prime) -> Vec<TripodTriple> {
    let p = p.get();
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            // a + b + c = 1 (mod p) has exactly one solution c in 0..p.
            let c = (1 + 2 * p - a - b) % p;
            let strict = a != 0 && b != 0 && c != 0 && a + b + c == p + 1;
            out.push(TripodTriple {
                values: [a, b, c],
                strict,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct TripodCounterexample {
    pub p: u32,
    pub triple: [u32; 3],
    pub mu: [u32; 3],
    pub strict: bool,
    pub mu_balanced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pp004Result {
    pub p: u32,
    pub triples: usize,
    pub strict: usize,
    pub holds: bool,
    pub counterexamples: Vec<TripodCounterexample>,
}

/// Checks, over every tripod triple, that strictness is equivalent to the
/// Miura image satisfying the balanced conditions.
pub fn check_pp004(p: Prime) -> Pp004Result {
    let set = tripod_strict_set(p);
    let mut counterexamples = Vec::new();
    for t in &set {
        let mu = t.values.map(|m| mu_unchecked(p.get(), m));
        let mu_balanced = satisfies_star(p.get(), mu);
        if mu_balanced != t.strict {
            counterexamples.push(TripodCounterexample {
                p: p.get(),
                triple: t.values,
                mu,
                strict: t.strict,
                mu_balanced,
            });
        }
    }
    Pp004Result {
        p: p.get(),
        triples: set.len(),
        strict: set.iter().filter(|t| t.strict).count(),
        holds: counterexamples.is_empty(),
        counterexamples,
    }
}

/// Branch values of the tripod numbering for a triple: slot 0 (vertex side)
/// carries the triple entry, slot 1 (open side) its involution.
pub fn tripod_numbering(p: Prime, triple: [u32; 3]) -> Vec<u32> {
    triple
        .iter()
        .flat_map(|&m| [m, inv_unchecked(p.get(), m)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::numbering::{is_balanced, radii_of};

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn mu_value_examples() {
        assert_eq!(mu_value(p(11), 10).unwrap(), 0);
        assert_eq!(mu_value(p(11), 9).unwrap(), 4);
        assert_eq!(mu_value(p(5), 0).unwrap(), 2);
        assert!(mu_value(p(5), 5).is_err());
    }

    #[test]
    fn mu_value_stays_below_half() {
        for q in Prime::up_to(31) {
            for m in 0..q.get() {
                assert!(mu_value(q, m).unwrap() <= (q.get() - 1) / 2);
            }
        }
    }

    #[test]
    fn tripod_image() {
        let t = builders::tripod();
        let a = BranchNumbering::new(&t, p(11), tripod_numbering(p(11), [1, 2, 9])).unwrap();
        let img = miura_transform(&t, &a).unwrap();
        assert_eq!(img.numbering.values(), &[0, 4, 4]);
        assert!(is_balanced(&t, &img.numbering));
        // exponent (10, 9, 2) maps to radii (0, 4, 4)
        assert_eq!(img.radii, ExponentVector(vec![0, 4, 4]));
        assert_eq!(img.radii, expected_radii(&t, &a));
    }

    #[test]
    fn figure_image() {
        let g = builders::figure_tree();
        let slot0: Vec<u32> = builders::FIGURE_BRANCH_PAIRS
            .iter()
            .map(|&(x, _)| x)
            .collect();
        let a = BranchNumbering::from_slot0(&g, p(11), &slot0).unwrap();
        let img = miura_transform(&g, &a).unwrap();
        assert_eq!(img.numbering.values(), &[0, 4, 4, 1, 3, 2, 1]);
        assert!(is_balanced(&g, &img.numbering));
        assert_eq!(radii_of(&g, &img.numbering), img.radii);
    }

    #[test]
    fn loop_with_leg_image() {
        let g = builders::loop_with_leg();
        let a = BranchNumbering::new(&g, p(7), vec![2, 5, 1, 6]).unwrap();
        let img = miura_transform(&g, &a).unwrap();
        assert_eq!(img.numbering.values(), &[2, 0]);
    }

    #[test]
    fn non_strict_input_is_rejected() {
        let t = builders::tripod();
        let a = BranchNumbering::new(&t, p(5), tripod_numbering(p(5), [0, 2, 4])).unwrap();
        let err = miura_transform(&t, &a).unwrap_err();
        assert!(
            matches!(err, Error::NotStrict(ref s) if s.contains("is 0")),
            "{err}"
        );
        let b = BranchNumbering::new(&t, p(5), tripod_numbering(p(5), [1, 1, 1])).unwrap();
        assert!(matches!(miura_transform(&t, &b), Err(Error::NotStrict(_))));
    }

    #[test]
    fn tripod_set_examples() {
        let strict = |q| -> Vec<[u32; 3]> {
            tripod_strict_set(p(q))
                .into_iter()
                .filter(|t| t.strict)
                .map(|t| t.values)
                .collect()
        };
        assert_eq!(strict(3), vec![[1, 1, 2], [1, 2, 1], [2, 1, 1]]);
        assert_eq!(strict(5).len(), 10);
        for q in [3, 5, 7, 11] {
            let set = tripod_strict_set(p(q));
            assert_eq!(set.len() as u32, q * q);
            let zero = set.iter().find(|t| t.values == [0, 0, 1]).unwrap();
            assert!(!zero.strict);
        }
    }

    #[test]
    fn pp004_small_primes() {
        for q in [5, 11, 13] {
            let r = check_pp004(p(q));
            assert!(r.holds, "{r:?}");
            assert!(r.counterexamples.is_empty());
            assert_eq!(r.strict as u32, q * (q - 1) / 2);
        }
    }
}
