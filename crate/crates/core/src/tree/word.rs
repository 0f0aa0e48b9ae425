use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Upper bound on the number of symbols in a single word component.
pub const MAX_WORD_LEN: usize = 1 << 16;

/// A finite word over an alphabet, stored as zero-based letter indices.
///
/// Text and file formats use one-based letters like the usual notation
/// `1322` for `c_1 c_3 c_2 c_2`; the conversion happens at the boundary.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteWord(Vec<u16>);

impl FiniteWord {
    pub fn new(symbols: Vec<u16>) -> Result<Self> {
        if symbols.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong(symbols.len()));
        }
        Ok(Self(symbols))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds a word from one-based letters, e.g. `[1, 3]` for `13`.
    pub fn from_one_based(letters: &[usize]) -> Result<Self> {
        let symbols = letters
            .iter()
            .map(|&l| {
                if l == 0 || l > u16::MAX as usize {
                    Err(Error::SymbolOutOfRange { symbol: l, n: u16::MAX as usize })
                } else {
                    Ok((l - 1) as u16)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[u16] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&s| s as usize + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u16> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u16> {
        self.0.last().copied()
    }

    /// The word with its last symbol removed (`u'` for `u = u' u_l`).
    pub fn parent(&self) -> Option<FiniteWord> {
        if self.0.is_empty() {
            None
        } else {
            Some(Self(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn concat(&self, other: &FiniteWord) -> Result<FiniteWord> {
        let mut s = self.0.clone();
        s.extend_from_slice(&other.0);
        Self::new(s)
    }

    pub fn pushed(&self, symbol: u16) -> FiniteWord {
        let mut s = self.0.clone();
        s.push(symbol);
        Self(s)
    }

    pub fn max_symbol(&self) -> Option<u16> {
        self.0.iter().copied().max()
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[u16], wide: bool) -> fmt::Result {
    for (i, s) in symbols.iter().enumerate() {
        if wide && i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{}", s + 1)?;
    }
    Ok(())
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.iter().any(|&s| s >= 9);
        // a lone wide symbol still needs a dot to be read back as one letter
        if wide && self.0.len() == 1 {
            f.write_str(".")?;
        }
        write_symbols(f, &self.0, wide)
    }
}

/// An eventually periodic infinite word `u v v v ...`, kept in canonical
/// form: the period is primitive and the preamble is as short as possible.
/// Two words are equal exactly when their canonical forms are.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpWord {
    preamble: Vec<u16>,
    period: Vec<u16>,
}

impl EpWord {
    pub fn new(preamble: FiniteWord, period: FiniteWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut w = Self {
            preamble: preamble.0,
            period: period.0,
        };
        w.canonicalize();
        Ok(w)
    }

    /// The purely periodic word `v v v ...`.
    pub fn periodic(period: FiniteWord) -> Result<Self> {
        Self::new(FiniteWord::empty(), period)
    }

    /// One-based convenience constructor, e.g. `from_one_based(&[1, 3], &[2])`
    /// for `13` followed by the period `2`.
    pub fn from_one_based(preamble: &[usize], period: &[usize]) -> Result<Self> {
        Self::new(
            FiniteWord::from_one_based(preamble)?,
            FiniteWord::from_one_based(period)?,
        )
    }

    fn canonicalize(&mut self) {
        let len = self.period.len();
        if let Some(p) = (1..len)
            .filter(|p| len % p == 0)
            .find(|&p| self.period.chunks(p).all(|c| c == &self.period[..p]))
        {
            self.period.truncate(p);
        }
        while let (Some(&a), Some(&b)) = (self.preamble.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.preamble.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preamble(&self) -> FiniteWord {
        FiniteWord(self.preamble.clone())
    }

    pub fn period(&self) -> FiniteWord {
        FiniteWord(self.period.clone())
    }

    pub fn preamble_symbols(&self) -> &[u16] {
        &self.preamble
    }

    pub fn period_symbols(&self) -> &[u16] {
        &self.period
    }

    pub fn first(&self) -> u16 {
        self.preamble.first().copied().unwrap_or(self.period[0])
    }

    pub fn max_symbol(&self) -> u16 {
        self.preamble.iter().chain(&self.period).copied().max().unwrap_or(0)
    }

    /// The infinite symbol sequence.
    pub fn symbols(&self) -> impl Iterator<Item = u16> + '_ {
        self.preamble.iter().copied().chain(self.period.iter().copied().cycle())
    }

    /// Prepends a finite word: `u . w`.
    pub fn prefixed(&self, prefix: &FiniteWord) -> Result<EpWord> {
        let mut pre = prefix.0.clone();
        pre.extend_from_slice(&self.preamble);
        Self::new(FiniteWord::new(pre)?, self.period())
    }

    /// One-sided shift: drops the first symbol.
    pub fn shift(&self) -> EpWord {
        let mut w = self.clone();
        if w.preamble.is_empty() {
            w.period.rotate_left(1);
        } else {
            w.preamble.remove(0);
        }
        w
    }

    /// `{ shift^m(w) : m >= 1 }`; at most `|preamble| + |period|` words.
    pub fn shift_orbit(&self) -> BTreeSet<EpWord> {
        let mut orbit = BTreeSet::new();
        let mut w = self.shift();
        while orbit.insert(w.clone()) {
            w = w.shift();
        }
        orbit
    }
}

impl fmt::Display for EpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.max_symbol() >= 9;
        if wide && self.preamble.len() <= 1 && self.period.len() <= 1 {
            f.write_str(".")?;
        }
        write_symbols(f, &self.preamble, wide)?;
        f.write_str("~")?;
        write_symbols(f, &self.period, wide)
    }
}

/// JSON shape of an eventually periodic word: one-based `pre` and `per`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpWordJson {
    pub pre: Vec<usize>,
    pub per: Vec<usize>,
}

impl From<&EpWord> for EpWordJson {
    fn from(w: &EpWord) -> Self {
        Self {
            pre: w.preamble().one_based(),
            per: w.period().one_based(),
        }
    }
}

impl TryFrom<&EpWordJson> for EpWord {
    type Error = Error;

    fn try_from(j: &EpWordJson) -> Result<Self> {
        EpWord::from_one_based(&j.pre, &j.per)
    }
}

/// A tip-to-tip relation `a ~ b` between two infinite words whose first
/// letters differ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    left: EpWord,
    right: EpWord,
}

impl Relation {
    pub fn new(left: EpWord, right: EpWord) -> Result<Self> {
        if left.first() == right.first() {
            return Err(Error::SameFirstLetter);
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &EpWord {
        &self.left
    }

    pub fn right(&self) -> &EpWord {
        &self.right
    }

    /// The pair of first letters, smaller first.
    pub fn letter_pair(&self) -> (u16, u16) {
        let (a, b) = (self.left.first(), self.right.first());
        (a.min(b), a.max(b))
    }

    pub fn max_symbol(&self) -> u16 {
        self.left.max_symbol().max(self.right.max_symbol())
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub left: EpWordJson,
    pub right: EpWordJson,
}

impl From<&Relation> for RelationJson {
    fn from(r: &Relation) -> Self {
        Self {
            left: (&r.left).into(),
            right: (&r.right).into(),
        }
    }
}

impl TryFrom<&RelationJson> for Relation {
    type Error = Error;

    fn try_from(j: &RelationJson) -> Result<Self> {
        Relation::new((&j.left).try_into()?, (&j.right).try_into()?)
    }
}

/// Post-critical set generated by the words of a relation set: the union of
/// `shift^m(w)` over `m >= 1` and every word `w` occurring in a relation.
///
/// The result is always finite for eventually periodic words.
pub fn post_critical_set<'a, I>(relations: I) -> BTreeSet<EpWord>
where
    I: IntoIterator<Item = &'a Relation>,
{
    let mut out = BTreeSet::new();
    for r in relations {
        out.extend(r.left.shift_orbit());
        out.extend(r.right.shift_orbit());
    }
    out
}
