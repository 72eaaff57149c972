use std::collections::HashSet;

use serde::Serialize;

use super::{support, HomogeneousDistribution, Subset};
use crate::error::Result;

/// A triple `(S, T, i)` with `i ∈ S - T` such that no `j ∈ T - S` makes
/// `S - i + j` a support member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeViolation {
    pub s: Subset,
    pub t: Subset,
    pub i: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeCheck {
    pub holds: bool,
    pub violation: Option<ExchangeViolation>,
    pub support_size: usize,
}

/// Exhaustively tests the basis-exchange axiom on the support of `d`.
///
/// Pairs are visited in lexicographic order of `(S, T)` and `i` ascending,
/// so the reported violation is the first one in that order.
pub fn check_exchange_property<D: HomogeneousDistribution + ?Sized>(d: &D, cap: u64) -> Result<ExchangeCheck> {
    let members: Vec<Subset> = support(d, cap)?.into_iter().map(|(s, _)| s).collect();
    let lookup: HashSet<&Subset> = members.iter().collect();
    for s in &members {
        for t in &members {
            if s == t {
                continue;
            }
            let t_minus_s = t.difference(s);
            for i in s.difference(t) {
                let ok = t_minus_s.iter().any(|&j| lookup.contains(&s.exchange(i, j)));
                if !ok {
                    return Ok(ExchangeCheck {
                        holds: false,
                        violation: Some(ExchangeViolation {
                            s: s.clone(),
                            t: t.clone(),
                            i,
                        }),
                        support_size: members.len(),
                    });
                }
            }
        }
    }
    Ok(ExchangeCheck {
        holds: true,
        violation: None,
        support_size: members.len(),
    })
}
