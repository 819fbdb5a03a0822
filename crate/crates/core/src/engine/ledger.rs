//! Integer zloty accounts and the moves between them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Where zlotys sit. `Node(k)` is the fund of the node whose bag is the
/// `k`-th maximal 3-clique (sorted order); `Debt` and `Aux` run negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Account {
    Vertex(usize),
    Node(usize),
    Tuple(u32),
    Paid,
    Saved,
    Debt,
    Aux,
}

impl fmt::Display for Account {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Account::Vertex(v) => write!(f, "v:{v}"),
            Account::Node(k) => write!(f, "node:{k}"),
            Account::Tuple(t) => write!(f, "tuple:{t}"),
            Account::Paid => write!(f, "paid"),
            Account::Saved => write!(f, "saved"),
            Account::Debt => write!(f, "debt"),
            Account::Aux => write!(f, "aux"),
        }
    }
}

impl FromStr for Account {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad account `{s}`");
        match s {
            "paid" => return Ok(Account::Paid),
            "saved" => return Ok(Account::Saved),
            "debt" => return Ok(Account::Debt),
            "aux" => return Ok(Account::Aux),
            _ => {}
        }
        let (kind, id) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "v" => id.parse().map(Account::Vertex).map_err(|_| bad()),
            "node" => id.parse().map(Account::Node).map_err(|_| bad()),
            "tuple" => id.parse().map(Account::Tuple).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Account {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Account {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub from: Account,
    pub to: Account,
    pub amount: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("move of non-positive amount {0}")]
    NonPositive(i64),
    #[error("{0} cannot be a source")]
    BadSource(Account),
    #[error("{0} would hold {1}")]
    OutOfRange(Account, i64),
}

/// Balances of every account. The sum over all accounts never changes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    balances: BTreeMap<Account, i64>,
    initial: i64,
}

impl Ledger {
    /// Ledger with `2` per vertex and `1` per listed node account.
    pub fn new(n: usize, node_accounts: usize) -> Self {
        let mut balances = BTreeMap::new();
        for v in 0..n {
            balances.insert(Account::Vertex(v), 2);
        }
        for k in 0..node_accounts {
            balances.insert(Account::Node(k), 1);
        }
        Ledger {
            balances,
            initial: 2 * n as i64 + node_accounts as i64,
        }
    }

    pub fn balance(&self, a: Account) -> i64 {
        self.balances.get(&a).copied().unwrap_or(0)
    }

    pub fn paid(&self) -> i64 {
        self.balance(Account::Paid)
    }

    pub fn saved(&self) -> i64 {
        self.balance(Account::Saved)
    }

    pub fn debt(&self) -> i64 {
        -self.balance(Account::Debt)
    }

    pub fn aux(&self) -> i64 {
        self.balance(Account::Aux)
    }

    pub fn initial(&self) -> i64 {
        self.initial
    }

    /// Funds still held by vertices, nodes and tuples.
    pub fn held(&self) -> i64 {
        self.balances
            .iter()
            .filter(|(a, _)| matches!(a, Account::Vertex(_) | Account::Node(_) | Account::Tuple(_)))
            .map(|(_, b)| b)
            .sum()
    }

    /// `initial = paid + saved + held + debt balance + aux balance`.
    pub fn conserved(&self) -> bool {
        self.balances.values().sum::<i64>() == self.initial
    }

    pub fn apply(&mut self, m: &Move) -> Result<(), LedgerError> {
        if m.amount <= 0 {
            return Err(LedgerError::NonPositive(m.amount));
        }
        if matches!(m.from, Account::Paid | Account::Saved) {
            return Err(LedgerError::BadSource(m.from));
        }
        let from = self.balance(m.from) - m.amount;
        let to = self.balance(m.to) + m.amount;
        check_range(m.from, from)?;
        check_range(m.to, to)?;
        self.balances.insert(m.from, from);
        self.balances.insert(m.to, to);
        Ok(())
    }
}

fn check_range(a: Account, value: i64) -> Result<(), LedgerError> {
    let ok = match a {
        Account::Debt => (-1..=0).contains(&value),
        Account::Aux => value <= 0,
        _ => value >= 0,
    };
    if ok {
        Ok(())
    } else {
        Err(LedgerError::OutOfRange(a, value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn account_strings_round_trip() {
        for a in [
            Account::Vertex(3),
            Account::Node(0),
            Account::Tuple(12),
            Account::Paid,
            Account::Saved,
            Account::Debt,
            Account::Aux,
        ] {
            assert_eq!(a.to_string().parse::<Account>().unwrap(), a);
        }
        assert!("x:1".parse::<Account>().is_err());
    }

    #[test]
    fn moves_conserve_and_respect_ranges() {
        let mut l = Ledger::new(2, 1);
        assert_eq!(l.initial(), 5);
        l.apply(&Move {
            from: Account::Vertex(0),
            to: Account::Saved,
            amount: 2,
        })
        .unwrap();
        assert!(l.conserved());
        assert!(l
            .apply(&Move {
                from: Account::Vertex(0),
                to: Account::Saved,
                amount: 1
            })
            .is_err());
        l.apply(&Move {
            from: Account::Debt,
            to: Account::Paid,
            amount: 1,
        })
        .unwrap();
        assert_eq!(l.debt(), 1);
        assert!(l
            .apply(&Move {
                from: Account::Debt,
                to: Account::Paid,
                amount: 1
            })
            .is_err());
        assert!(l
            .apply(&Move {
                from: Account::Saved,
                to: Account::Vertex(1),
                amount: 1
            })
            .is_err());
        assert_eq!(l.held(), 3);
        assert!(l.conserved());
    }
}
