//! Freely reduced words over free-group generators.

use std::fmt;

/// A freely reduced word. Letters are signed 1-based generator indices:
/// `+g` is the generator, `-g` its inverse. The empty word is the identity.
///
/// All constructors reduce, so no adjacent pair `(g, -g)` ever survives.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    /// The identity (empty) word.
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Single-letter word; `g` may be negative for an inverse generator.
    ///
    /// Panics if `g == 0` (zero is not a letter).
    pub fn generator(g: i32) -> Self {
        assert!(g != 0, "generator index must be nonzero");
        Word { letters: vec![g] }
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn from_letters(letters: &[i32]) -> Self {
        let mut stack: Vec<i32> = Vec::with_capacity(letters.len());
        for &l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
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

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used (0 for the identity word).
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Freely reduced concatenation `self · rhs`.
    pub fn multiply(&self, rhs: &Word) -> Word {
        let mut stack = self.letters.clone();
        for &l in &rhs.letters {
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `self^n`; negative exponents invert first.
    pub fn pow(&self, n: i32) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Render with generator names, e.g. `a*b^-2`. The identity prints `1`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

/// Helper returned by [`Word::display_with`].
pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        // run-length encode consecutive equal letters into powers
        let mut parts: Vec<String> = Vec::new();
        let letters = &self.word.letters;
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let count = (j - i) as i32;
            let idx = l.unsigned_abs() as usize - 1;
            let name: &str = self.names.get(idx).map(|s| s.as_str()).unwrap_or("?");
            let exp = if l > 0 { count } else { -count };
            if exp == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i = j;
        }
        f.write_str(&parts.join("*"))
    }
}
