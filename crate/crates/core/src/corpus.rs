//! Built-in presentations, shipped as `.grp` files.

use crate::presentations::{parse_relative_presentation, Presentation, RelativePresentation, WordOracle};

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry {
        name: "z",
        summary: "infinite cyclic group",
        text: include_str!("../corpus/z.grp"),
    },
    CorpusEntry {
        name: "z2",
        summary: "free abelian group of rank 2",
        text: include_str!("../corpus/z2.grp"),
    },
    CorpusEntry {
        name: "f2",
        summary: "free group of rank 2",
        text: include_str!("../corpus/f2.grp"),
    },
    CorpusEntry {
        name: "genus2",
        summary: "closed genus-2 surface group",
        text: include_str!("../corpus/genus2.grp"),
    },
    CorpusEntry {
        name: "z5",
        summary: "cyclic group of order 5",
        text: include_str!("../corpus/z5.grp"),
    },
    CorpusEntry {
        name: "s3",
        summary: "symmetric group on three letters",
        text: include_str!("../corpus/s3.grp"),
    },
    CorpusEntry {
        name: "z2_rel",
        summary: "rank-2 free abelian group relative to <a>",
        text: include_str!("../corpus/z2_rel.grp"),
    },
];

/// Accepts a bare name (`z2`) or a file name (`z2.grp`).
pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    let name = name.strip_suffix(".grp").unwrap_or(name);
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn relative(name: &str) -> Option<RelativePresentation> {
    let e = entry(name)?;
    Some(parse_relative_presentation(e.text).expect("corpus files parse"))
}

pub fn presentation(name: &str) -> Option<Presentation> {
    relative(name).map(|rp| rp.ambient().clone())
}

/// The oracle named in the file, `free` if none.
pub fn oracle(name: &str) -> Option<WordOracle> {
    relative(name).map(|rp| rp.ambient_oracle().unwrap_or(WordOracle::FreeReduction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::PreparedOracle;

    #[test]
    fn every_entry_parses_with_a_complete_oracle() {
        for e in ENTRIES {
            let p = presentation(e.name).unwrap();
            let o = PreparedOracle::new(oracle(e.name).unwrap(), &p).unwrap();
            assert!(o.is_complete(), "{}", e.name);
        }
        assert_eq!(relative("z2_rel.grp").unwrap().peripherals().len(), 1);
        assert!(entry("q8").is_none());
    }

    #[test]
    fn finite_orders() {
        for (name, order) in [("z5", 5), ("s3", 6)] {
            let p = presentation(name).unwrap();
            let o = PreparedOracle::new(oracle(name).unwrap(), &p).unwrap();
            assert_eq!(o.finite_group().unwrap().order(), order);
        }
    }
}
