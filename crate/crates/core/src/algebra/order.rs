use std::cmp::Ordering;

use super::Monomial;

/// Term orders supported by the Gröbner engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic; the canonical storage order.
    #[default]
    GrevLex,
    Lex,
    /// Elimination order: the first `split` variables are compared by
    /// grevlex first, ties broken by grevlex on the remaining variables.
    Block { split: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::GrevLex => grevlex(ea, eb),
            MonomialOrder::Lex => ea.cmp(eb),
            MonomialOrder::Block { split } => {
                let s = split.min(ea.len());
                grevlex(&ea[..s], &eb[..s]).then_with(|| grevlex(&ea[s..], &eb[s..]))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::Block { split } => format!("block({split})"),
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| u64::from(e)).sum();
    let db: u64 = b.iter().map(|&e| u64::from(e)).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b.iter()).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}
