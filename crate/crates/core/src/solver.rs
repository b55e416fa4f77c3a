//! Every solver behind one enum, with applicability checks and automatic selection.

use std::fmt;
use std::str::FromStr;

use crate::bribery::{
    classify_dichotomy, solve_approval_flip_unary_prices, solve_approval_flip_unary_weights, solve_plurality_basic,
    solve_plurality_negative_priced, solve_plurality_priced, solve_plurality_unary_prices,
    solve_plurality_unary_weights, solve_plurality_weighted, solve_scoring_priced, solve_scoring_unary_weights,
    solve_veto, BriberyQuery, BriberyWitness, Complexity, Justification, Outcome, ProtocolVariant, MAX_ENUM_CANDIDATES,
};
use crate::election::{BallotKind, Rule};
use crate::error::{Error, Result};
use crate::ilp::{solve_full_dodgson_or_young_bribery, solve_kemeny_ilp, solve_scoring_ilp, MAX_MODEL_CANDIDATES};
use crate::oracle::{oracle_bribery, OracleBudget};
use crate::scalar::Int;

/// Solver families as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverId {
    Auto,
    Greedy,
    Sweep,
    DpPrices,
    DpWeights,
    Enum,
    Ilp,
    Oracle,
}

impl SolverId {
    pub const ALL: [SolverId; 8] = [
        SolverId::Auto,
        SolverId::Greedy,
        SolverId::Sweep,
        SolverId::DpPrices,
        SolverId::DpWeights,
        SolverId::Enum,
        SolverId::Ilp,
        SolverId::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverId::Auto => "auto",
            SolverId::Greedy => "greedy",
            SolverId::Sweep => "sweep",
            SolverId::DpPrices => "dp-prices",
            SolverId::DpWeights => "dp-weights",
            SolverId::Enum => "enum",
            SolverId::Ilp => "ilp",
            SolverId::Oracle => "oracle",
        }
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| Error::Unsupported(format!("unknown solver {s}")))
    }
}

/// One concrete procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    PluralityBasic,
    PluralityPriced,
    PluralityWeighted,
    PluralityNegative,
    /// Weighted plurality-like protocols through the plurality threshold sweep.
    PluralityLikeWeighted,
    PluralityUnaryPrices,
    PluralityUnaryWeights,
    /// Protocols giving every position the same points.
    TiedScores,
    ApprovalFlipPrices,
    ApprovalFlipWeights,
    ScoringPriced,
    ScoringUnaryWeights,
    Veto,
    ScoringIlp,
    KemenyIlp,
    DodgsonYoungIlp,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 17] = [
        Algorithm::PluralityBasic,
        Algorithm::PluralityPriced,
        Algorithm::PluralityWeighted,
        Algorithm::PluralityNegative,
        Algorithm::PluralityLikeWeighted,
        Algorithm::PluralityUnaryPrices,
        Algorithm::PluralityUnaryWeights,
        Algorithm::TiedScores,
        Algorithm::ApprovalFlipPrices,
        Algorithm::ApprovalFlipWeights,
        Algorithm::ScoringPriced,
        Algorithm::ScoringUnaryWeights,
        Algorithm::Veto,
        Algorithm::ScoringIlp,
        Algorithm::KemenyIlp,
        Algorithm::DodgsonYoungIlp,
        Algorithm::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PluralityBasic => "plurality-greedy",
            Algorithm::PluralityPriced => "plurality-sweep",
            Algorithm::PluralityWeighted => "plurality-weighted",
            Algorithm::PluralityNegative => "plurality-negative",
            Algorithm::PluralityLikeWeighted => "plurality-like-weighted",
            Algorithm::PluralityUnaryPrices => "plurality-dp-prices",
            Algorithm::PluralityUnaryWeights => "plurality-dp-weights",
            Algorithm::TiedScores => "tied-scores",
            Algorithm::ApprovalFlipPrices => "flip-dp-prices",
            Algorithm::ApprovalFlipWeights => "flip-dp-weights",
            Algorithm::ScoringPriced => "scoring-enum",
            Algorithm::ScoringUnaryWeights => "scoring-dp-weights",
            Algorithm::Veto => "veto-greedy",
            Algorithm::ScoringIlp => "scoring-ilp",
            Algorithm::KemenyIlp => "kemeny-ilp",
            Algorithm::DodgsonYoungIlp => "dodgson-young-ilp",
            Algorithm::Oracle => "oracle",
        }
    }

    pub fn id(self) -> SolverId {
        use Algorithm::*;
        match self {
            PluralityBasic | PluralityWeighted | PluralityNegative | PluralityLikeWeighted | TiedScores | Veto => {
                SolverId::Greedy
            }
            PluralityPriced => SolverId::Sweep,
            PluralityUnaryPrices | ApprovalFlipPrices => SolverId::DpPrices,
            PluralityUnaryWeights | ApprovalFlipWeights | ScoringUnaryWeights => SolverId::DpWeights,
            ScoringPriced => SolverId::Enum,
            ScoringIlp | KemenyIlp | DodgsonYoungIlp => SolverId::Ilp,
            Oracle => SolverId::Oracle,
        }
    }

    /// Whether the procedure is defined for `q`. Size limits of the pseudo-polynomial and
    /// enumerative procedures surface as [`Error::TooLarge`] from [`Algorithm::run`].
    pub fn applies<T: Int>(self, q: &BriberyQuery<T>) -> bool {
        use Algorithm::*;
        let v = q.variant;
        let plain_kind = !v.negative && !v.approval_flip;
        let unit_weights = !v.weighted || q.election.voters().iter().all(|b| b.weight.is_one());
        let small = q.m() <= MAX_MODEL_CANDIDATES;
        let orders = q.election.kind() == BallotKind::Orders || q.election.voters().is_empty();
        let alpha = q.rule.points(q.m()).ok().flatten();
        let plurality = q.rule == Rule::Plurality;
        match self {
            PluralityBasic => plurality && !v.priced && !v.weighted && !v.negative,
            PluralityPriced => plurality && v.priced && !v.weighted && !v.negative,
            PluralityWeighted => plurality && !v.priced && v.weighted && !v.negative,
            PluralityNegative => plurality && v.negative && !v.weighted,
            PluralityLikeWeighted => {
                !v.priced && plain_kind && alpha.as_ref().is_some_and(|a| {
                    let a = a.alpha();
                    a.len() >= 2 && a[0] > a[1] && a[1..].iter().all(|x| *x == a[1])
                })
            }
            PluralityUnaryPrices | PluralityUnaryWeights => plurality && !v.negative,
            TiedScores => plain_kind && alpha.as_ref().is_some_and(|a| a.alpha().iter().all(|x| *x == a.alpha()[0])),
            ApprovalFlipPrices | ApprovalFlipWeights => q.rule == Rule::Approval && v.approval_flip,
            ScoringPriced => alpha.is_some() && !v.weighted && plain_kind && q.m() <= MAX_ENUM_CANDIDATES,
            ScoringUnaryWeights => alpha.is_some() && plain_kind && q.m() <= MAX_ENUM_CANDIDATES,
            Veto => q.rule == Rule::Veto && !v.priced && !v.weighted,
            ScoringIlp => alpha.is_some() && small && orders && !v.priced && unit_weights && plain_kind,
            KemenyIlp => q.rule == Rule::Kemeny && small && !v.priced && unit_weights && plain_kind,
            DodgsonYoungIlp => matches!(q.rule, Rule::Dodgson | Rule::Young) && small && unit_weights && plain_kind,
            Oracle => true,
        }
    }

    pub fn run<T: Int>(self, q: &BriberyQuery<T>, caps: &OracleBudget) -> Result<Outcome<T>> {
        use Algorithm::*;
        if !self.applies(q) {
            return Err(Error::Unsupported(format!("{} does not handle this query", self.name())));
        }
        match self {
            PluralityBasic => solve_plurality_basic(q),
            PluralityPriced => solve_plurality_priced(q),
            PluralityWeighted => solve_plurality_weighted(q),
            PluralityNegative => solve_plurality_negative_priced(q),
            PluralityLikeWeighted => {
                let mut as_plurality = q.clone();
                as_plurality.election = q.normalized()?;
                as_plurality.rule = Rule::Plurality;
                as_plurality.variant.weighted = true;
                solve_plurality_weighted(&as_plurality)
            }
            PluralityUnaryPrices => solve_plurality_unary_prices(q),
            PluralityUnaryWeights => solve_plurality_unary_weights(q),
            TiedScores => {
                let alone = q.m() == 1 || !q.variant.unique;
                Ok(if alone { Outcome::Feasible(BriberyWitness::empty()) } else { Outcome::Infeasible })
            }
            ApprovalFlipPrices => solve_approval_flip_unary_prices(q),
            ApprovalFlipWeights => solve_approval_flip_unary_weights(q),
            ScoringPriced => solve_scoring_priced(q),
            ScoringUnaryWeights => solve_scoring_unary_weights(q),
            Veto => solve_veto(q),
            ScoringIlp => solve_scoring_ilp(q),
            KemenyIlp => solve_kemeny_ilp(q),
            DodgsonYoungIlp => solve_full_dodgson_or_young_bribery(q),
            Oracle => oracle_bribery(q, caps),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The polynomial procedure matching `q`'s rule, variant, and encoding, or the oracle when the
/// cell is hard or has no dedicated procedure.
pub fn auto_algorithm<T: Int>(q: &BriberyQuery<T>) -> Algorithm {
    use Algorithm::*;
    let v = q.variant;
    let e = q.encoding;
    let pick = |a: Algorithm| if a.applies(q) { a } else { Oracle };
    match &q.rule {
        Rule::Plurality if v.negative => pick(PluralityNegative),
        Rule::Plurality => match (v.priced, v.weighted) {
            (false, false) => PluralityBasic,
            (true, false) => PluralityPriced,
            (false, true) => PluralityWeighted,
            (true, true) if e.prices_unary => PluralityUnaryPrices,
            (true, true) if e.weights_unary => PluralityUnaryWeights,
            (true, true) => Oracle,
        },
        Rule::Approval if v.approval_flip => {
            if !v.priced || (e.prices_unary && !e.weights_unary) {
                ApprovalFlipPrices
            } else if !v.weighted || e.weights_unary {
                ApprovalFlipWeights
            } else {
                Oracle
            }
        }
        Rule::Veto if !v.priced && !v.weighted => Veto,
        Rule::Kemeny => pick(KemenyIlp),
        Rule::Dodgson | Rule::Young => pick(DodgsonYoungIlp),
        rule => {
            let Ok(Some(alpha)) = rule.points(q.m()) else { return Oracle };
            let cell = ProtocolVariant {
                priced: v.priced,
                weighted: v.weighted,
                prices_unary: e.prices_unary,
                weights_unary: e.weights_unary,
            };
            let verdict = classify_dichotomy(&alpha, cell);
            if verdict.class == Complexity::NpComplete {
                return Oracle;
            }
            match verdict.justification {
                Justification::UnweightedEnumeration => pick(ScoringPriced),
                Justification::UnaryWeightsDp => pick(ScoringUnaryWeights),
                Justification::AllPointsEqual => pick(TiedScores),
                Justification::PluralityLike if !v.priced => pick(PluralityLikeWeighted),
                _ => Oracle,
            }
        }
    }
}

/// The first procedure of family `id` that handles `q`.
pub fn select<T: Int>(q: &BriberyQuery<T>, id: SolverId) -> Result<Algorithm> {
    if id == SolverId::Auto {
        return Ok(auto_algorithm(q));
    }
    Algorithm::ALL
        .into_iter()
        .find(|a| a.id() == id && a.applies(q))
        .ok_or_else(|| Error::Unsupported(format!("no {id} solver handles this query")))
}

/// Runs the selected family on `q`, returning the procedure used.
pub fn solve<T: Int>(q: &BriberyQuery<T>, id: SolverId, caps: &OracleBudget) -> Result<(Algorithm, Outcome<T>)> {
    let a = select(q, id)?;
    Ok((a, a.run(q, caps)?))
}
