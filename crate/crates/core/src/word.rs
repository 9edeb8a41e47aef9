use serde::{Serialize, Serializer};
use std::fmt;

/// A finite address over the map indices of a system.
///
/// Symbols are 0-based in the API and printed 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(symbol: usize) -> Self {
        Word(vec![symbol])
    }

    /// Builds a word from 1-based symbols, as written in the mathematics.
    ///
    /// Panics on a zero symbol.
    pub fn from_one_based(symbols: &[usize]) -> Self {
        Word(
            symbols
                .iter()
                .map(|&s| s.checked_sub(1).expect("1-based symbols start at 1"))
                .collect(),
        )
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn push(&self, symbol: usize) -> Word {
        let mut v = self.0.clone();
        v.push(symbol);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// All words of exactly `len` symbols over `alphabet` letters, in lexicographic order.
    pub fn all_of_length(alphabet: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| (0..alphabet).map(move |s| w.push(s)))
                .collect();
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => f.write_str("()"),
            [s] => write!(f, "{}", s + 1),
            syms => {
                f.write_str("(")?;
                for (i, s) in syms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", s + 1)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_one_based() {
        assert_eq!(Word::from_one_based(&[2, 3]).to_string(), "(2,3)");
        assert_eq!(Word::single(0).to_string(), "1");
        assert_eq!(Word::empty().to_string(), "()");
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let words = Word::all_of_length(2, 2);
        let shown: Vec<String> = words.iter().map(Word::to_string).collect();
        assert_eq!(shown, ["(1,1)", "(1,2)", "(2,1)", "(2,2)"]);
    }
}
