//! Rule identifiers and guard evaluation.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    B1,
    G1,
    G2,
    B2,
    B3,
    G3,
    G4,
    B4,
    G5,
    B5,
    T1,
    T2,
    T3,
    T4,
    T5,
}

/// Precedence order for bags of size at least four.
pub const WIDE_RULES: [Rule; 10] = [
    Rule::B1,
    Rule::G1,
    Rule::G2,
    Rule::B2,
    Rule::B3,
    Rule::G3,
    Rule::G4,
    Rule::B4,
    Rule::G5,
    Rule::B5,
];

/// Precedence order for maximal 3-clique bags.
pub const TRIANGLE_RULES: [Rule; 5] = [Rule::T1, Rule::T2, Rule::T3, Rule::T4, Rule::T5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Wide,
    Triangle,
}

impl Rule {
    pub fn family(self) -> Family {
        if TRIANGLE_RULES.contains(&self) {
            Family::Triangle
        } else {
            Family::Wide
        }
    }

    /// Good rules save at least one zloty.
    pub fn is_good(self) -> bool {
        matches!(self, Rule::G1 | Rule::G2 | Rule::G3 | Rule::G4 | Rule::G5)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// What the guards look at, for one vertex `v` of bag `U`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleContext {
    pub v_red: bool,
    pub pairs: usize,
    pub triples: usize,
    /// `v` is in exactly one pair and its partner is in another tuple.
    pub partner_in_other_tuple: bool,
    /// Some vertex of `U \ {v}` is red.
    pub other_red_in_bag: bool,
}

impl RuleContext {
    pub fn tuples(&self) -> usize {
        self.pairs + self.triples
    }
}

pub fn guard(rule: Rule, c: &RuleContext) -> bool {
    match rule {
        Rule::B1 | Rule::T1 => c.v_red,
        Rule::G1 => c.tuples() >= 3,
        Rule::G2 => c.pairs >= 2,
        Rule::B2 => c.pairs >= 1 && c.triples >= 1,
        Rule::B3 => c.triples >= 2,
        Rule::G3 => c.triples >= 1,
        Rule::G4 => c.pairs >= 1 && c.partner_in_other_tuple,
        Rule::B4 => c.pairs >= 1,
        Rule::G5 => c.tuples() == 0 && c.other_red_in_bag,
        Rule::B5 => c.tuples() == 0 && !c.other_red_in_bag,
        Rule::T2 => c.tuples() >= 2,
        Rule::T3 => c.tuples() == 1,
        Rule::T4 => c.other_red_in_bag,
        Rule::T5 => true,
    }
}

/// First rule of the family whose guard holds.
pub fn select_rule(family: Family, c: &RuleContext) -> Option<Rule> {
    let order: &[Rule] = match family {
        Family::Wide => &WIDE_RULES,
        Family::Triangle => &TRIANGLE_RULES,
    };
    order.iter().copied().find(|&r| guard(r, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RuleContext {
        RuleContext::default()
    }

    #[test]
    fn red_vertex_takes_b1() {
        let c = RuleContext {
            v_red: true,
            pairs: 2,
            ..ctx()
        };
        assert_eq!(select_rule(Family::Wide, &c), Some(Rule::B1));
        assert_eq!(select_rule(Family::Triangle, &c), Some(Rule::T1));
    }

    #[test]
    fn single_triple_takes_g3() {
        let c = RuleContext { triples: 1, ..ctx() };
        assert_eq!(select_rule(Family::Wide, &c), Some(Rule::G3));
    }

    #[test]
    fn pair_with_busy_partner_takes_g4() {
        let c = RuleContext {
            pairs: 1,
            partner_in_other_tuple: true,
            ..ctx()
        };
        assert_eq!(select_rule(Family::Wide, &c), Some(Rule::G4));
        let c = RuleContext { pairs: 1, ..ctx() };
        assert_eq!(select_rule(Family::Wide, &c), Some(Rule::B4));
    }

    #[test]
    fn precedence_of_tuple_rules() {
        assert_eq!(
            select_rule(
                Family::Wide,
                &RuleContext {
                    pairs: 1,
                    triples: 2,
                    ..ctx()
                }
            ),
            Some(Rule::G1)
        );
        assert_eq!(
            select_rule(Family::Wide, &RuleContext { pairs: 2, ..ctx() }),
            Some(Rule::G2)
        );
        assert_eq!(
            select_rule(
                Family::Wide,
                &RuleContext {
                    pairs: 1,
                    triples: 1,
                    ..ctx()
                }
            ),
            Some(Rule::B2)
        );
        assert_eq!(
            select_rule(Family::Wide, &RuleContext { triples: 2, ..ctx() }),
            Some(Rule::B3)
        );
    }

    #[test]
    fn untupled_vertices() {
        assert_eq!(
            select_rule(
                Family::Wide,
                &RuleContext {
                    other_red_in_bag: true,
                    ..ctx()
                }
            ),
            Some(Rule::G5)
        );
        assert_eq!(select_rule(Family::Wide, &ctx()), Some(Rule::B5));
        assert_eq!(select_rule(Family::Triangle, &ctx()), Some(Rule::T5));
        assert_eq!(
            select_rule(
                Family::Triangle,
                &RuleContext {
                    other_red_in_bag: true,
                    ..ctx()
                }
            ),
            Some(Rule::T4)
        );
        assert_eq!(
            select_rule(
                Family::Triangle,
                &RuleContext {
                    pairs: 1,
                    triples: 1,
                    ..ctx()
                }
            ),
            Some(Rule::T2)
        );
        assert_eq!(
            select_rule(Family::Triangle, &RuleContext { triples: 1, ..ctx() }),
            Some(Rule::T3)
        );
    }

    #[test]
    fn good_rules() {
        assert!(Rule::G5.is_good());
        assert!(!Rule::B5.is_good());
        assert_eq!(Rule::T3.family(), Family::Triangle);
        assert_eq!(Rule::B4.family(), Family::Wide);
    }
}
