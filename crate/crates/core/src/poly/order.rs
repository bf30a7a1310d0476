use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    Grevlex,
    Lex,
    /// Grevlex on the first `n` variables, ties broken by grevlex on the rest.
    /// Eliminates the first block.
    Block(usize),
}

/// A monomial order together with a variable priority permutation.
///
/// `priority[j]` is the variable that plays the role of position `j`; the
/// identity permutation is stored as `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    kind: OrderKind,
    priority: Option<Vec<usize>>,
}

impl TermOrder {
    pub const fn grevlex() -> TermOrder {
        TermOrder { kind: OrderKind::Grevlex, priority: None }
    }

    pub const fn lex() -> TermOrder {
        TermOrder { kind: OrderKind::Lex, priority: None }
    }

    pub const fn block(elim_count: usize) -> TermOrder {
        TermOrder { kind: OrderKind::Block(elim_count), priority: None }
    }

    /// Reorders variable priority. `priority` must be a permutation.
    pub fn with_priority(self, priority: Vec<usize>) -> Result<TermOrder> {
        let mut seen = vec![false; priority.len()];
        for &v in &priority {
            if v >= seen.len() || seen[v] {
                return Err(Error::InvalidInput(format!("{priority:?} is not a permutation")));
            }
            seen[v] = true;
        }
        let identity = priority.iter().enumerate().all(|(i, &v)| i == v);
        Ok(TermOrder { kind: self.kind, priority: if identity { None } else { Some(priority) } })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> Option<&[usize]> {
        self.priority.as_deref()
    }

    /// `Greater` means `a` is the larger monomial.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exps(), b.exps());
        match &self.priority {
            None => compare(self.kind, a, b),
            Some(p) => {
                let pa: Vec<u32> = p.iter().map(|&i| a[i]).collect();
                let pb: Vec<u32> = p.iter().map(|&i| b[i]).collect();
                compare(self.kind, &pa, &pb)
            }
        }
    }
}

impl Default for TermOrder {
    fn default() -> TermOrder {
        TermOrder::grevlex()
    }
}

fn compare(kind: OrderKind, a: &[u32], b: &[u32]) -> Ordering {
    match kind {
        OrderKind::Lex => a.cmp(b),
        OrderKind::Grevlex => grevlex(a, b),
        OrderKind::Block(k) => {
            let k = k.min(a.len());
            grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
        }
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OrderKind::Grevlex => write!(f, "grevlex")?,
            OrderKind::Lex => write!(f, "lex")?,
            OrderKind::Block(k) => write!(f, "block:{k}")?,
        }
        if let Some(p) = &self.priority {
            let p: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", p.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for TermOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<TermOrder> {
        let s = s.trim();
        let (head, perm) = match s.split_once('[') {
            Some((h, rest)) => (h, Some(rest.trim_end_matches(']'))),
            None => (s, None),
        };
        let order = match head {
            "grevlex" => TermOrder::grevlex(),
            "lex" => TermOrder::lex(),
            _ => match head.strip_prefix("block:").and_then(|k| k.parse().ok()) {
                Some(k) => TermOrder::block(k),
                None => return Err(Error::InvalidInput(format!("unknown term order {s:?}"))),
            },
        };
        match perm {
            None => Ok(order),
            Some(p) => {
                let p = p
                    .split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidInput(format!("bad permutation in {s:?}")))?;
                order.with_priority(p)
            }
        }
    }
}
