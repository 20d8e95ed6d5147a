use std::fmt;

use serde::{Deserialize, Serialize};

/// Element of a free group: a sequence of signed 1-based generator indices.
///
/// Letter `+(g + 1)` is generator `g`, letter `-(g + 1)` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<i32>,
}

/// Index of a letter in the `2 * generator_count` alphabet used by
/// multiplication tables: generator `g` is `2g`, its inverse `2g + 1`.
pub fn letter_slot(letter: i32) -> usize {
    debug_assert!(letter != 0);
    let g = (letter.unsigned_abs() - 1) as usize;
    2 * g + usize::from(letter < 0)
}

/// Inverse of [`letter_slot`].
pub fn slot_letter(slot: usize) -> i32 {
    let g = (slot / 2) as i32 + 1;
    if slot % 2 == 0 {
        g
    } else {
        -g
    }
}

/// Generator index (0-based) of a letter.
pub fn letter_generator(letter: i32) -> usize {
    (letter.unsigned_abs() - 1) as usize
}

impl Word {
    /// Panics if a letter is zero.
    pub fn new(letters: Vec<i32>) -> Self {
        assert!(letters.iter().all(|&l| l != 0), "zero is not a letter");
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self::new(vec![index as i32 + 1])
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used, plus one.
    pub fn generator_span(&self) -> usize {
        self.letters
            .iter()
            .map(|&l| letter_generator(l) + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn push(&mut self, letter: i32) {
        assert!(letter != 0);
        self.letters.push(letter);
    }

    pub fn power(&self, exponent: usize) -> Word {
        Word {
            letters: self.letters.repeat(exponent),
        }
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    /// Freely and cyclically reduced form (a conjugate of `self`).
    pub fn cyclic_reduce(&self) -> Word {
        let reduced = self.free_reduce();
        let l = &reduced.letters;
        let mut start = 0;
        let mut end = l.len();
        while end - start >= 2 && l[start] == -l[end - 1] {
            start += 1;
            end -= 1;
        }
        Word {
            letters: l[start..end].to_vec(),
        }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && (self.letters.len() < 2 || self.letters[0] != -self.letters[self.letters.len() - 1])
    }

    /// Cyclic rotation starting at `offset`.
    pub fn rotate(&self, offset: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let offset = offset % self.letters.len();
        let mut letters = self.letters[offset..].to_vec();
        letters.extend_from_slice(&self.letters[..offset]);
        Word { letters }
    }

    /// All cyclic rotations, in offset order (duplicates kept).
    pub fn rotations(&self) -> Vec<Word> {
        (0..self.letters.len()).map(|i| self.rotate(i)).collect()
    }

    /// Exponent sum of each generator, for `generator_count` generators.
    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for &l in &self.letters {
            sums[letter_generator(l)] += if l > 0 { 1 } else { -1 };
        }
        sums
    }

    /// Commutator `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }

    /// Text form: generator names, inverses in uppercase. Falls back to
    /// `name^-1` for names that are not single lowercase letters.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for &l in &self.letters {
            let name = names
                .get(letter_generator(l))
                .cloned()
                .unwrap_or_else(|| format!("g{}", letter_generator(l)));
            if l > 0 {
                out.push_str(&name);
            } else if name.len() == 1 {
                out.push_str(&name.to_uppercase());
            } else {
                out.push_str(&format!("{name}^-1"));
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl From<Vec<i32>> for Word {
    fn from(letters: Vec<i32>) -> Self {
        Word::new(letters)
    }
}

/// Freely reduced form of `w`.
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}
