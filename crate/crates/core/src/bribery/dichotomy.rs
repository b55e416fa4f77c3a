use crate::election::ScoringProtocol;
use crate::scalar::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Complexity {
    P,
    NpComplete,
}

/// Why a cell of the classification lands where it does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    /// Unweighted voters: a fixed number of orders makes enumeration polynomial.
    UnweightedEnumeration,
    /// Small weights: the weight-split DP is polynomial.
    UnaryWeightsDp,
    /// Every candidate always ties.
    AllPointsEqual,
    /// Weighted and priced with binary values: hard unless every candidate always ties.
    WeightedPricedHard,
    /// The protocol behaves like plurality, which the threshold sweeps and knapsack DPs solve.
    PluralityLike,
    /// Weighted and the protocol separates positions below the top: hard.
    WeightedNotPluralityLike,
}

/// The variant dimensions the classification looks at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProtocolVariant {
    pub priced: bool,
    pub weighted: bool,
    pub prices_unary: bool,
    pub weights_unary: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DichotomyVerdict {
    pub class: Complexity,
    pub justification: Justification,
}

/// Complexity of bribery under scoring protocol `alpha` for the given variant.
pub fn classify_dichotomy<T: Int>(alpha: &ScoringProtocol<T>, variant: ProtocolVariant) -> DichotomyVerdict {
    use Complexity::*;
    use Justification::*;
    let a = alpha.alpha();
    let all_equal = a.iter().all(|x| *x == a[0]);
    let tail_equal = a[1..].iter().all(|x| *x == a[a.len() - 1]);
    let (class, justification) = if !variant.weighted {
        (P, UnweightedEnumeration)
    } else if variant.weights_unary {
        (P, UnaryWeightsDp)
    } else if all_equal {
        (P, AllPointsEqual)
    } else if variant.priced && !variant.prices_unary {
        (NpComplete, WeightedPricedHard)
    } else if tail_equal {
        (P, PluralityLike)
    } else {
        (NpComplete, WeightedNotPluralityLike)
    };
    DichotomyVerdict { class, justification }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(a: &[i64]) -> ScoringProtocol<i64> {
        ScoringProtocol::new(a.to_vec()).unwrap()
    }

    #[test]
    fn canonical_cells() {
        let weighted = ProtocolVariant { weighted: true, ..ProtocolVariant::default() };
        let both = ProtocolVariant { priced: true, ..weighted };
        assert_eq!(classify_dichotomy(&alpha(&[1, 0]), both).class, Complexity::NpComplete);
        assert_eq!(classify_dichotomy(&alpha(&[1, 0, 0]), weighted).class, Complexity::P);
        assert_eq!(classify_dichotomy(&alpha(&[2, 1, 0]), weighted).class, Complexity::NpComplete);
        assert_eq!(classify_dichotomy(&alpha(&[3, 3, 3]), both).justification, Justification::AllPointsEqual);
    }
}
