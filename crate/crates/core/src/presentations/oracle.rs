use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::abelian::{AbelianQuotient, LatticeOverflow};
use super::coset::FiniteGroup;
use super::dehn::{satisfies_c_prime, DehnReducer};
use super::presentation::Presentation;
use super::word::Word;

/// Strategy for deciding word equality in a presented group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WordOracle {
    /// Free cancellation only; complete exactly for free presentations.
    FreeReduction,
    /// Exponent vectors modulo the relation lattice; requires every pair of
    /// generators to commute via a relator.
    AbelianNormalForm,
    /// Greedy Dehn algorithm; complete for `C'(1/6)` presentations.
    DehnReduction,
    /// Todd–Coxeter enumeration; requires group order at most `bound`.
    FiniteEnumeration { bound: usize },
}

impl fmt::Display for WordOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordOracle::FreeReduction => write!(f, "free"),
            WordOracle::AbelianNormalForm => write!(f, "abelian"),
            WordOracle::DehnReduction => write!(f, "dehn"),
            WordOracle::FiniteEnumeration { bound } => write!(f, "finite:{bound}"),
        }
    }
}

impl FromStr for WordOracle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "free" => return Ok(WordOracle::FreeReduction),
            "abelian" => return Ok(WordOracle::AbelianNormalForm),
            "dehn" => return Ok(WordOracle::DehnReduction),
            _ => {}
        }
        let bound = s
            .strip_prefix("finite:")
            .or_else(|| s.strip_prefix("finite(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| format!("unknown oracle `{s}`"))?;
        match bound.trim().parse::<usize>() {
            Ok(b) if b > 0 => Ok(WordOracle::FiniteEnumeration { bound: b }),
            _ => Err(format!("bad enumeration bound in `{s}`")),
        }
    }
}

/// Outcome of an equality query. `Unknown` is reported as "not equal" only
/// by complete oracles (see [`PreparedOracle::is_complete`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equal,
    Unknown,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("abelian normal form needs a commutator relator for generators {0} and {1}")]
    NotAbelian(usize, usize),
    #[error("finite enumeration did not close within {0} cosets")]
    EnumerationLimit(usize),
    #[error("group has order {order}, above the enumeration bound {bound}")]
    OrderAboveBound { order: usize, bound: usize },
    #[error(transparent)]
    Overflow(#[from] LatticeOverflow),
}

/// Vertex identification key. Equal keys imply equal group elements; for
/// complete oracles the converse holds too.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OracleKey {
    Word(Word),
    Vector(Vec<i64>),
    Element(usize),
}

#[derive(Clone, Debug)]
enum Engine {
    Free,
    Abelian(AbelianQuotient),
    Dehn(DehnReducer),
    Finite(FiniteGroup),
}

/// An oracle checked for applicability and with its tables precomputed.
#[derive(Clone, Debug)]
pub struct PreparedOracle {
    kind: WordOracle,
    engine: Engine,
    complete: bool,
    abelianization: AbelianQuotient,
}

/// Generator pairs whose commutator (in either order, any rotation or
/// inverse) is a relator.
fn all_generators_commute(p: &Presentation) -> Result<(), OracleError> {
    let n = p.generator_count();
    for i in 0..n {
        for j in i + 1..n {
            let c = Word::commutator(&Word::generator(i), &Word::generator(j));
            let hit = p.relators().iter().any(|r| {
                r.len() == 4
                    && (r.rotations().contains(&c) || r.inverse().rotations().contains(&c))
            });
            if !hit {
                return Err(OracleError::NotAbelian(i, j));
            }
        }
    }
    Ok(())
}

/// Working coset limit for an enumeration whose final order must not exceed
/// `bound`.
pub fn enumeration_coset_limit(bound: usize) -> usize {
    bound.saturating_mul(64).max(4096)
}

impl PreparedOracle {
    pub fn new(kind: WordOracle, p: &Presentation) -> Result<Self, OracleError> {
        let abelianization = AbelianQuotient::from_relators(p.generator_count(), p.relators())?;
        let (engine, complete) = match kind {
            WordOracle::FreeReduction => (Engine::Free, p.relators().is_empty()),
            WordOracle::AbelianNormalForm => {
                all_generators_commute(p)?;
                (Engine::Abelian(abelianization.clone()), true)
            }
            WordOracle::DehnReduction => (
                Engine::Dehn(DehnReducer::new(p)),
                satisfies_c_prime(p, Ratio::new(1, 6)),
            ),
            WordOracle::FiniteEnumeration { bound } => {
                let limit = enumeration_coset_limit(bound);
                let g = FiniteGroup::enumerate(p, limit)
                    .map_err(|_| OracleError::EnumerationLimit(limit))?;
                if g.order() > bound {
                    return Err(OracleError::OrderAboveBound {
                        order: g.order(),
                        bound,
                    });
                }
                (Engine::Finite(g), true)
            }
        };
        Ok(Self {
            kind,
            engine,
            complete,
            abelianization,
        })
    }

    pub fn kind(&self) -> WordOracle {
        self.kind
    }

    /// `true` when distinct keys certify distinct elements.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn abelianization(&self) -> &AbelianQuotient {
        &self.abelianization
    }

    pub fn finite_group(&self) -> Option<&FiniteGroup> {
        match &self.engine {
            Engine::Finite(g) => Some(g),
            _ => None,
        }
    }

    pub fn abelian_quotient(&self) -> Option<&AbelianQuotient> {
        match &self.engine {
            Engine::Abelian(a) => Some(a),
            _ => None,
        }
    }

    pub fn key(&self, w: &Word) -> OracleKey {
        match &self.engine {
            Engine::Free => OracleKey::Word(w.free_reduce()),
            Engine::Abelian(a) => OracleKey::Vector(a.normal_form(w)),
            Engine::Dehn(d) => OracleKey::Word(d.reduce(w)),
            Engine::Finite(g) => OracleKey::Element(g.element_of(w)),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Verdict {
        if self.abelianization.normal_form(u) != self.abelianization.normal_form(v) {
            return Verdict::Unknown;
        }
        let same = match &self.engine {
            Engine::Dehn(d) => d.is_trivial(&u.concat(&v.inverse())),
            _ => self.key(u) == self.key(v),
        };
        if same {
            Verdict::Equal
        } else {
            Verdict::Unknown
        }
    }
}

/// Sound partial word problem: `Equal` only if `u = v` in `⟨p⟩`.
pub fn word_equal(
    oracle: WordOracle,
    p: &Presentation,
    u: &Word,
    v: &Word,
) -> Result<Verdict, OracleError> {
    Ok(PreparedOracle::new(oracle, p)?.equal(u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    #[test]
    fn documented_examples() {
        let z2 = parse_presentation("gens: a b\nrel: abAB").unwrap();
        let c = z2.parse_word("abAB").unwrap();
        assert_eq!(
            word_equal(WordOracle::AbelianNormalForm, &z2, &c, &Word::empty()),
            Ok(Verdict::Equal)
        );
        let ab = z2.parse_word("ab").unwrap();
        let ba = z2.parse_word("ba").unwrap();
        assert_eq!(
            word_equal(WordOracle::FreeReduction, &z2, &ab, &ba),
            Ok(Verdict::Unknown)
        );
        let z5 = parse_presentation("gens: a\nrel: aaaaa").unwrap();
        assert_eq!(
            word_equal(
                WordOracle::FiniteEnumeration { bound: 10 },
                &z5,
                &Word::generator(0).power(6),
                &Word::generator(0)
            ),
            Ok(Verdict::Equal)
        );
    }

    #[test]
    fn applicability() {
        let f2 = Presentation::free(&["a", "b"]);
        assert_eq!(
            PreparedOracle::new(WordOracle::AbelianNormalForm, &f2).unwrap_err(),
            OracleError::NotAbelian(0, 1)
        );
        let z5 = parse_presentation("gens: a\nrel: aaaaa").unwrap();
        assert!(matches!(
            PreparedOracle::new(WordOracle::FiniteEnumeration { bound: 4 }, &z5),
            Err(OracleError::OrderAboveBound { order: 5, bound: 4 })
        ));
        let z2 = parse_presentation("gens: a b\nrel: abAB").unwrap();
        assert!(matches!(
            PreparedOracle::new(WordOracle::FiniteEnumeration { bound: 3 }, &z2),
            Err(OracleError::EnumerationLimit(_))
        ));
        assert!(PreparedOracle::new(WordOracle::FreeReduction, &f2).unwrap().is_complete());
        assert!(!PreparedOracle::new(WordOracle::FreeReduction, &z2).unwrap().is_complete());
        let g2 = parse_presentation("gens: a b c d\nrel: abABcdCD").unwrap();
        assert!(PreparedOracle::new(WordOracle::DehnReduction, &g2).unwrap().is_complete());
    }

    #[test]
    fn oracle_names_round_trip() {
        for o in [
            WordOracle::FreeReduction,
            WordOracle::AbelianNormalForm,
            WordOracle::DehnReduction,
            WordOracle::FiniteEnumeration { bound: 12 },
        ] {
            assert_eq!(o.to_string().parse::<WordOracle>(), Ok(o));
        }
        assert_eq!(
            "finite(10)".parse::<WordOracle>(),
            Ok(WordOracle::FiniteEnumeration { bound: 10 })
        );
        assert!("finite:0".parse::<WordOracle>().is_err());
    }

    #[test]
    fn dehn_equality_on_surface_group() {
        let g2 = parse_presentation("gens: a b c d\nrel: abABcdCD").unwrap();
        let o = PreparedOracle::new(WordOracle::DehnReduction, &g2).unwrap();
        let u = g2.parse_word("abAB").unwrap();
        let v = g2.parse_word("dcDC").unwrap();
        assert_eq!(o.equal(&u, &v), Verdict::Equal);
        assert_eq!(o.equal(&u, &Word::empty()), Verdict::Unknown);
    }
}
