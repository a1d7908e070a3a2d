use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A nonempty symbol sequence `(α₁, …, αₙ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylinderWord(Vec<u8>);

impl CylinderWord {
    pub fn new(symbols: Vec<u8>, symbol_count: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= symbol_count) {
            return Err(Error::InvalidWord(format!("symbol {s} out of range 0..{symbol_count}")));
        }
        Ok(Self(symbols))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, j: usize) -> Self {
        Self(self.0[..j.clamp(1, self.0.len())].to_vec())
    }

    pub fn extended(&self, symbol: u8) -> Self {
        let mut v = self.0.clone();
        v.push(symbol);
        Self(v)
    }

    /// `(l, t)`: the number of zero symbols and the number of maximal runs of
    /// zeros.
    pub fn zero_runs(&self) -> (usize, usize) {
        let l = self.0.iter().filter(|&&s| s == 0).count();
        let t = self.0.iter().enumerate().filter(|&(i, &s)| s == 0 && (i == 0 || self.0[i - 1] != 0)).count();
        (l, t)
    }
}

impl fmt::Display for CylinderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn validation_and_runs() {
        assert!(CylinderWord::new(vec![], 2).is_err());
        assert!(CylinderWord::new(vec![0, 2], 2).is_err());
        let w = CylinderWord::new(vec![0, 0, 3, 0, 1, 0, 0], 10).unwrap();
        assert_eq!(w.zero_runs(), (5, 3));
        assert_eq!(w.prefix(3).symbols(), &[0, 0, 3]);
        assert_eq!(alloc::string::ToString::to_string(&w.prefix(2)), "0.0");
    }
}
