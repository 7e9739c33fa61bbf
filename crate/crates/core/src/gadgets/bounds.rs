use num::{BigInt, One};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{ratio, to_pq, Rational};

/// Euler's bound `|E| <= 3|V| - 6`. Necessary for planarity, not sufficient.
pub fn planarity_necessary_check(g: &Graph) -> Result<bool> {
    if g.n() < 3 {
        return Err(Error::Precondition(format!(
            "needs at least 3 vertices, got {}",
            g.n()
        )));
    }
    Ok(g.m() <= 3 * g.n() - 6)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub h: Option<usize>,
    /// `xc(COR(G)) >= dim >= n`.
    pub dimension_bound: usize,
    /// `1.5^h`, exact.
    pub cited_bound: Option<String>,
    pub cited_bound_note: &'static str,
    /// `n · 1.5^h`, exact.
    pub geometric_mean_squared: Option<String>,
    /// `sqrt(n · 1.5^h)` when that is rational.
    pub geometric_mean_exact: Option<String>,
    /// `sqrt(n · 1.5^h)` truncated to 6 decimals.
    pub geometric_mean_decimal: Option<String>,
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let (p, q) = (r.numer().sqrt(), r.denom().sqrt());
    (&p * &p == *r.numer() && &q * &q == *r.denom()).then(|| Rational::new(p, q))
}

fn decimal_sqrt(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    // floor(sqrt(p/q) · 10^d) = floor(sqrt(p · q · 10^2d) / q)
    let root = (r.numer() * r.denom() * &scale * &scale).sqrt() / r.denom();
    let (int, frac) = (&root / &scale, &root % &scale);
    format!("{int}.{frac:0>width$}", width = digits as usize)
}

/// The dimension bound `n`, the cited `1.5^h` (not computed here) and their
/// geometric mean.
pub fn lower_bound_report(n: usize, h: Option<usize>) -> LowerBoundReport {
    let cited = h.map(|h| {
        let mut c = Rational::one();
        for _ in 0..h {
            c *= ratio(3, 2);
        }
        c
    });
    let sq = cited
        .as_ref()
        .map(|c| c * Rational::from_integer(BigInt::from(n)));
    LowerBoundReport {
        n,
        h,
        dimension_bound: n,
        cited_bound: cited.as_ref().map(to_pq),
        cited_bound_note: "xc(COR(K_h)) >= 1.5^h is quoted from the literature, not computed",
        geometric_mean_exact: sq.as_ref().and_then(rational_sqrt).map(|r| to_pq(&r)),
        geometric_mean_decimal: sq.as_ref().map(|s| decimal_sqrt(s, 6)),
        geometric_mean_squared: sq.as_ref().map(to_pq),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::crossover_clause_table;
    use crate::gadgets::replace_clauses;
    use crate::graph::make_complete;

    #[test]
    fn euler_bound() {
        assert!(!planarity_necessary_check(&make_complete(5).unwrap()).unwrap());
        assert!(planarity_necessary_check(&make_complete(4).unwrap()).unwrap());
        let rg = replace_clauses(&crossover_clause_table()).unwrap();
        assert!(planarity_necessary_check(&rg.graph).unwrap());
        assert!(planarity_necessary_check(&make_complete(2).unwrap()).is_err());
    }

    #[test]
    fn sixteen_and_four() {
        let r = lower_bound_report(16, Some(4));
        assert_eq!(r.dimension_bound, 16);
        assert_eq!(r.cited_bound.as_deref(), Some("81/16"));
        assert_eq!(r.geometric_mean_exact.as_deref(), Some("9/1"));
        assert_eq!(r.geometric_mean_decimal.as_deref(), Some("9.000000"));
    }

    #[test]
    fn irrational_mean_and_no_height() {
        let r = lower_bound_report(2, Some(1));
        assert_eq!(r.geometric_mean_exact, None);
        assert_eq!(r.geometric_mean_decimal.as_deref(), Some("1.732050"));
        let r = lower_bound_report(1, None);
        assert_eq!(r.dimension_bound, 1);
        assert!(r.cited_bound.is_none());
    }
}
