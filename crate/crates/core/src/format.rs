//! Line-oriented election files.
//!
//! ```text
//! # comment
//! candidates: a b p
//! rule: scoring 2 1 0
//! target: p
//! budget: 3
//! variant: priced weighted unique unary-prices
//! voter: mult=2 weight=3 price=1 order=a>b>p
//! ```
//!
//! Approval voters use `approve=<bits>` and may carry `flips=<p1>,<p2>,...`. Everything after the
//! `candidates:` line is optional.

use std::fmt::Write;

use crate::bribery::{BribeAction, BriberyQuery, BriberyWitness, Encoding, Variant};
use crate::election::{ApprovalVector, Ballot, BallotKind, Election, PreferenceOrder, Rule, ScoringProtocol, VoterBlock};
use crate::error::{Error, Result};
use crate::scalar::Int;

/// Everything a file can say.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElectionFile<T> {
    pub election: Election<T>,
    pub rule: Option<Rule<T>>,
    pub target: Option<usize>,
    pub budget: Option<T>,
    pub variant: Variant,
    pub encoding: Encoding,
}

impl<T: Int> ElectionFile<T> {
    pub fn from_query(q: &BriberyQuery<T>) -> Self {
        Self {
            election: q.election.clone(),
            rule: Some(q.rule.clone()),
            target: Some(q.target),
            budget: Some(q.budget.clone()),
            variant: q.variant,
            encoding: q.encoding,
        }
    }

    /// The query the file describes; `target`, `budget`, and `rule` must all be present.
    pub fn query(&self) -> Result<BriberyQuery<T>> {
        let missing = |what: &str| Error::Input(format!("no {what} line"));
        let rule = self.rule.clone().ok_or_else(|| missing("rule"))?;
        let target = self.target.ok_or_else(|| missing("target"))?;
        let budget = self.budget.clone().ok_or_else(|| missing("budget"))?;
        Ok(BriberyQuery::new(self.election.clone(), rule, target, budget, self.variant)?.with_encoding(self.encoding))
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn number<T: Int>(line: usize, s: &str) -> Result<T> {
    let x: T = s.parse().map_err(|_| err(line, format!("not an integer: {s}")))?;
    if x.is_negative() {
        return Err(err(line, format!("negative number {s}")));
    }
    Ok(x)
}

fn parse_rule<T: Int>(line: usize, s: &str) -> Result<Rule<T>> {
    let mut words = s.split_whitespace();
    let name = words.next().ok_or_else(|| err(line, "empty rule"))?;
    let rest: Vec<&str> = words.collect();
    let bare = |r: Rule<T>| if rest.is_empty() { Ok(r) } else { Err(err(line, format!("{name} takes no arguments"))) };
    match name {
        "plurality" => bare(Rule::Plurality),
        "approval" => bare(Rule::Approval),
        "veto" => bare(Rule::Veto),
        "dodgson" => bare(Rule::Dodgson),
        "young" => bare(Rule::Young),
        "kemeny" => bare(Rule::Kemeny),
        "kapproval" => match rest[..] {
            [k] => Ok(Rule::KApproval(k.parse().map_err(|_| err(line, format!("bad k: {k}")))?)),
            _ => Err(err(line, "kapproval takes one argument")),
        },
        "scoring" => {
            let alpha = rest.iter().map(|a| number(line, a)).collect::<Result<Vec<T>>>()?;
            Ok(Rule::Scoring(ScoringProtocol::new(alpha).map_err(|e| err(line, e.to_string()))?))
        }
        _ => Err(err(line, format!("unknown rule {name}"))),
    }
}

fn parse_order(line: usize, names: &[String], value: &str) -> Result<PreferenceOrder> {
    let mut ranking = Vec::with_capacity(names.len());
    for name in value.split('>') {
        let c = names.iter().position(|n| n == name).ok_or_else(|| err(line, format!("unknown candidate {name}")))?;
        if ranking.contains(&c) {
            return Err(err(line, format!("{name} ranked twice")));
        }
        ranking.push(c);
    }
    if ranking.len() != names.len() {
        return Err(err(line, format!("order ranks {} of {} candidates", ranking.len(), names.len())));
    }
    PreferenceOrder::new(ranking).map_err(|e| err(line, e.to_string()))
}

fn parse_bits(line: usize, m: usize, value: &str) -> Result<ApprovalVector> {
    let bits = value
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(err(line, format!("bad approval bit {ch}"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    if bits.len() != m {
        return Err(err(line, format!("approval has {} bits, expected {m}", bits.len())));
    }
    Ok(ApprovalVector::new(bits))
}

fn parse_voter<T: Int>(line: usize, s: &str, names: &[String]) -> Result<VoterBlock<T>> {
    let m = names.len();
    let (mut mult, mut weight, mut price) = (T::one(), T::one(), T::one());
    let mut flips = None;
    let mut ballot: Option<Ballot> = None;
    for field in s.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| err(line, format!("expected key=value, got {field}")))?;
        match key {
            "mult" => mult = number(line, value)?,
            "weight" => weight = number(line, value)?,
            "price" => price = number(line, value)?,
            "flips" => flips = Some(value.split(',').map(|x| number(line, x)).collect::<Result<Vec<T>>>()?),
            "order" => ballot = Some(parse_order(line, names, value)?.into()),
            "approve" => ballot = Some(parse_bits(line, m, value)?.into()),
            _ => return Err(err(line, format!("unknown voter field {key}"))),
        }
    }
    let ballot = ballot.ok_or_else(|| err(line, "voter without order= or approve="))?;
    if mult.is_zero() {
        return Err(err(line, "mult must be at least 1"));
    }
    let mut v = VoterBlock::new(ballot).with_multiplicity(mult).with_weight(weight).with_price(price);
    if let Some(f) = flips {
        if f.len() != m {
            return Err(err(line, format!("{} flip prices, expected {m}", f.len())));
        }
        v = v.with_flip_prices(f);
    }
    Ok(v)
}

/// Parses a whole file.
pub fn parse_file<T: Int>(text: &str) -> Result<ElectionFile<T>> {
    let mut names: Option<Vec<String>> = None;
    let mut rule = None;
    let mut target_name: Option<(usize, String)> = None;
    let mut budget = None;
    let mut variant = Variant::default();
    let mut encoding = Encoding::default();
    let mut voters = Vec::new();
    let mut kinds = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once(':').ok_or_else(|| err(line, format!("expected key: value, got {body}")))?;
        let value = value.trim();
        match key.trim() {
            "candidates" => {
                if names.is_some() {
                    return Err(err(line, "second candidates line"));
                }
                let list: Vec<String> = value.split_whitespace().map(str::to_string).collect();
                for (j, n) in list.iter().enumerate() {
                    if list[..j].contains(n) {
                        return Err(err(line, format!("duplicate candidate {n}")));
                    }
                    if n.contains('>') {
                        return Err(err(line, format!("candidate name {n} contains '>'")));
                    }
                }
                if list.is_empty() {
                    return Err(err(line, "no candidates"));
                }
                names = Some(list);
            }
            "rule" => rule = Some(parse_rule(line, value)?),
            "target" => target_name = Some((line, value.to_string())),
            "budget" => budget = Some(number(line, value)?),
            "variant" => {
                for flag in value.split_whitespace() {
                    match flag {
                        "priced" => variant.priced = true,
                        "weighted" => variant.weighted = true,
                        "negative" => variant.negative = true,
                        "flip" => variant.approval_flip = true,
                        "unique" => variant.unique = true,
                        "unary-prices" => encoding.prices_unary = true,
                        "unary-weights" => encoding.weights_unary = true,
                        _ => return Err(err(line, format!("unknown variant flag {flag}"))),
                    }
                }
            }
            "voter" => {
                let names = names.as_ref().ok_or_else(|| err(line, "voter before candidates"))?;
                let v: VoterBlock<T> = parse_voter(line, value, names)?;
                kinds.push((line, v.ballot.kind()));
                voters.push(v);
            }
            other => return Err(err(line, format!("unknown key {other}"))),
        }
    }
    let names = names.ok_or_else(|| err(0, "no candidates line"))?;
    let kind = match (&rule, kinds.first()) {
        (_, Some((_, k))) => *k,
        (Some(r), None) => r.ballot_kind(),
        (None, None) => BallotKind::Orders,
    };
    if let Some((line, _)) = kinds.iter().find(|(_, k)| *k != kind) {
        return Err(err(*line, "orders and approvals mixed"));
    }
    let target = match target_name {
        Some((line, n)) => Some(names.iter().position(|c| *c == n).ok_or_else(|| err(line, format!("unknown candidate {n}")))?),
        None => None,
    };
    let election = Election::with_kind(names, kind, voters).map_err(|e| err(0, e.to_string()))?;
    if let Some(r) = &rule {
        r.check(&election).map_err(|e| err(0, e.to_string()))?;
    }
    Ok(ElectionFile { election, rule, target, budget, variant, encoding })
}

/// Parses the election and rule, ignoring query lines.
pub fn parse_election<T: Int>(text: &str) -> Result<(Election<T>, Option<Rule<T>>)> {
    let f = parse_file(text)?;
    Ok((f.election, f.rule))
}

/// `order=a>b` or `approve=10`, as on a voter line.
pub fn ballot_text<T: Int>(e: &Election<T>, b: &Ballot) -> String {
    match b {
        Ballot::Order(o) => {
            let names: Vec<&str> = o.ranking().iter().map(|&c| e.name(c)).collect();
            format!("order={}", names.join(">"))
        }
        Ballot::Approval(a) => {
            let bits: String = a.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
            format!("approve={bits}")
        }
    }
}

/// One `bribe:` line per entry, blocks numbered from 0 in file order.
pub fn serialize_witness<T: Int>(e: &Election<T>, w: &BriberyWitness<T>) -> String {
    let mut out = String::new();
    for b in &w.bribes {
        let action = match &b.action {
            BribeAction::Rewrite(ballot) => ballot_text(e, ballot),
            BribeAction::Flip(entries) => {
                let names: Vec<&str> = entries.iter().map(|&c| e.name(c)).collect();
                format!("flip={}", names.join(","))
            }
        };
        let _ = writeln!(out, "bribe: block={} count={} {action}", b.block, b.count);
    }
    out
}

/// Reads what [`serialize_witness`] writes; other lines are ignored.
pub fn parse_witness<T: Int>(e: &Election<T>, text: &str) -> Result<BriberyWitness<T>> {
    let mut w = BriberyWitness::empty();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some(rest) = raw.split('#').next().unwrap_or("").trim().strip_prefix("bribe:") else { continue };
        let (mut block, mut count, mut action) = (None, None, None);
        for field in rest.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| err(line, format!("expected key=value, got {field:?}")))?;
            match key {
                "block" => block = Some(value.parse::<usize>().map_err(|_| err(line, format!("bad block {value:?}")))?),
                "count" => count = Some(number::<T>(line, value)?),
                "order" => action = Some(BribeAction::Rewrite(parse_order(line, e.candidates(), value)?.into())),
                "approve" => action = Some(BribeAction::Rewrite(parse_bits(line, e.m(), value)?.into())),
                "flip" => {
                    let entries = value
                        .split(',')
                        .filter(|n| !n.is_empty())
                        .map(|n| e.index_of(n).ok_or_else(|| err(line, format!("unknown candidate {n:?}"))))
                        .collect::<Result<Vec<_>>>()?;
                    action = Some(BribeAction::Flip(entries));
                }
                _ => return Err(err(line, format!("unknown field {key:?}"))),
            }
        }
        let block = block.ok_or_else(|| err(line, "bribe without block"))?;
        if block >= e.voters().len() {
            return Err(err(line, format!("no voter block {block}")));
        }
        w.push(block, count.unwrap_or_else(T::one), action.ok_or_else(|| err(line, "bribe without a ballot"))?);
    }
    Ok(w)
}

fn write_voters<T: Int>(out: &mut String, e: &Election<T>) {
    for v in e.voters() {
        out.push_str("voter:");
        if !v.multiplicity.is_one() {
            let _ = write!(out, " mult={}", v.multiplicity);
        }
        if !v.weight.is_one() {
            let _ = write!(out, " weight={}", v.weight);
        }
        if !v.price.is_one() {
            let _ = write!(out, " price={}", v.price);
        }
        let _ = write!(out, " {}", ballot_text(e, &v.ballot));
        if let Some(f) = &v.flip_prices {
            let list: Vec<String> = f.iter().map(|x| x.to_string()).collect();
            let _ = write!(out, " flips={}", list.join(","));
        }
        out.push('\n');
    }
}

pub fn serialize_election<T: Int>(e: &Election<T>, rule: Option<&Rule<T>>) -> String {
    let mut out = format!("candidates: {}\n", e.candidates().join(" "));
    if let Some(r) = rule {
        let _ = writeln!(out, "rule: {r}");
    }
    write_voters(&mut out, e);
    out
}

pub fn serialize_file<T: Int>(f: &ElectionFile<T>) -> String {
    let mut out = format!("candidates: {}\n", f.election.candidates().join(" "));
    if let Some(r) = &f.rule {
        let _ = writeln!(out, "rule: {r}");
    }
    if let Some(t) = f.target {
        let _ = writeln!(out, "target: {}", f.election.name(t));
    }
    if let Some(b) = &f.budget {
        let _ = writeln!(out, "budget: {b}");
    }
    let flags: Vec<&str> = [
        (f.variant.priced, "priced"),
        (f.variant.weighted, "weighted"),
        (f.variant.negative, "negative"),
        (f.variant.approval_flip, "flip"),
        (f.variant.unique, "unique"),
        (f.encoding.prices_unary, "unary-prices"),
        (f.encoding.weights_unary, "unary-weights"),
    ]
    .into_iter()
    .filter_map(|(on, name)| on.then_some(name))
    .collect();
    if !flags.is_empty() {
        let _ = writeln!(out, "variant: {}", flags.join(" "));
    }
    write_voters(&mut out, &f.election);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_candidates_one_voter() {
        let (e, rule) = parse_election::<i64>("candidates: a b\nvoter: order=a>b").unwrap();
        assert_eq!(e.m(), 2);
        assert_eq!(e.voters().len(), 1);
        assert!(rule.is_none());
    }

    #[test]
    fn approval_bits() {
        let (e, _) = parse_election::<i64>("candidates: a b\nvoter: approve=10\n").unwrap();
        let a = e.voters()[0].ballot.as_approval().unwrap();
        assert!(a.approves(0) && !a.approves(1));
    }

    #[test]
    fn rejects() {
        for (text, line) in [
            ("candidates: a b\nvoter: order=a>a", 2),
            ("candidates: a b\nvoter: order=a>z", 2),
            ("candidates: a b\n\nvoter: approve=1", 3),
            ("candidates: a b\nvoter: weight=-1 order=a>b", 2),
            ("candidates: a b\nrule: borda", 2),
            ("voter: order=a>b", 1),
        ] {
            match parse_election::<i64>(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn round_trip() {
        let text = "# sample\ncandidates: a b p\nrule: scoring 2 1 0\ntarget: p\nbudget: 4\nvariant: priced unique\n\
                    voter: mult=3 weight=2 order=a>b>p\nvoter: price=0 order=p>a>b  # free\n";
        let f = parse_file::<i64>(text).unwrap();
        let again = parse_file::<i64>(&serialize_file(&f)).unwrap();
        assert_eq!(f, again);
        assert_eq!(serialize_file(&again), serialize_file(&f));
        assert_eq!(f.query().unwrap().budget, 4);
    }

    #[test]
    fn flips_round_trip() {
        let text = "candidates: p c\nrule: approval\nvariant: priced flip\nvoter: approve=01 flips=3,5\n";
        let f = parse_file::<i64>(text).unwrap();
        assert_eq!(f.election.voters()[0].flip_price(1), 5);
        assert_eq!(serialize_file(&f), text);
    }

    #[test]
    fn witnesses_round_trip() {
        let (e, _) = parse_election::<i64>("candidates: a b p\nvoter: mult=2 approve=100\nvoter: approve=110").unwrap();
        let mut w = BriberyWitness::empty();
        w.push(0, 2, BribeAction::Rewrite(ApprovalVector::only(3, 2).into()));
        w.push(1, 1, BribeAction::Flip(vec![0, 2]));
        let text = serialize_witness(&e, &w);
        assert_eq!(text, "bribe: block=0 count=2 approve=001\nbribe: block=1 count=1 flip=a,p\n");
        assert_eq!(parse_witness(&e, &text).unwrap(), w);
        assert!(parse_witness(&e, "bribe: block=5 approve=001").is_err());
        assert!(parse_witness(&e, "bribe: block=0 order=a>b>p").is_ok());
    }
}
