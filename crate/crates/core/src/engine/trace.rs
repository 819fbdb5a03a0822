//! Event log, serialised as JSON lines.

use serde::{Deserialize, Serialize};

use super::ledger::Move;
use super::rules::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Init,
    Rule,
    Surgery,
    Reduction,
    BranchBegin,
    BranchEnd,
    Colored,
    TupleCreated,
    TupleCeased,
    Saved,
    DebtIncurred,
    DebtRepaid,
    Removed,
    AuxMinted,
    AuxBurned,
    Finish,
}

/// One trace line. Markers (`rule`, `surgery`, `reduction`, branch
/// brackets) carry no moves; effects carry the ledger moves they made.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub i: usize,
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bag: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lineage: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangles: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub moves: Vec<Move>,
    #[serde(default)]
    pub saved: i64,
}

impl Event {
    pub fn new(kind: EventKind) -> Self {
        Event {
            i: 0,
            kind,
            rule: None,
            vertex: None,
            node: None,
            bag: None,
            tuple: None,
            members: None,
            lineage: None,
            reason: None,
            n: None,
            t: None,
            triangles: None,
            moves: Vec::new(),
            saved: 0,
        }
    }

    pub fn rule(mut self, r: Rule) -> Self {
        self.rule = Some(r);
        self
    }

    pub fn vertex(mut self, v: usize) -> Self {
        self.vertex = Some(v);
        self
    }

    pub fn node(mut self, u: usize) -> Self {
        self.node = Some(u);
        self
    }

    pub fn bag(mut self, b: Vec<usize>) -> Self {
        self.bag = Some(b);
        self
    }

    pub fn tuple(mut self, id: u32) -> Self {
        self.tuple = Some(id);
        self
    }

    pub fn members(mut self, m: Vec<usize>) -> Self {
        self.members = Some(m);
        self
    }

    pub fn lineage(mut self, l: Option<u32>) -> Self {
        self.lineage = l;
        self
    }

    pub fn reason(mut self, r: impl Into<String>) -> Self {
        self.reason = Some(r.into());
        self
    }

    pub fn moves(mut self, m: Vec<Move>) -> Self {
        self.saved = m
            .iter()
            .filter(|mv| mv.to == super::ledger::Account::Saved)
            .map(|mv| mv.amount)
            .sum();
        self.moves = m;
        self
    }
}

/// The full event list of one solve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace {
    pub events: Vec<Event>,
}

impl Trace {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialise"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Trace, String> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e: Event = serde_json::from_str(line).map_err(|err| format!("line {}: {err}", i + 1))?;
            events.push(e);
        }
        Ok(Trace { events })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Number of branch brackets and the saving recorded by each.
    pub fn branch_savings(&self) -> Vec<i64> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::BranchEnd)
            .map(|e| e.saved)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::ledger::Account;

    #[test]
    fn jsonl_round_trip() {
        let e = Event::new(EventKind::Colored).vertex(3).moves(vec![Move {
            from: Account::Vertex(3),
            to: Account::Paid,
            amount: 2,
        }]);
        let t = Trace {
            events: vec![e.clone(), Event::new(EventKind::Finish)],
        };
        let text = t.to_jsonl();
        assert!(text.starts_with(
            r#"{"i":0,"kind":"colored","vertex":3,"moves":[{"from":"v:3","to":"paid","amount":2}],"saved":0}"#
        ));
        assert_eq!(Trace::from_jsonl(&text).unwrap(), t);
    }

    #[test]
    fn saved_field_sums_moves_to_saved() {
        let e = Event::new(EventKind::Saved).moves(vec![
            Move {
                from: Account::Vertex(1),
                to: Account::Saved,
                amount: 2,
            },
            Move {
                from: Account::Tuple(0),
                to: Account::Saved,
                amount: 1,
            },
        ]);
        assert_eq!(e.saved, 3);
    }
}
