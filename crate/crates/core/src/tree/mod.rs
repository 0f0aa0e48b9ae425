//! Alphabets, words and the geometric map of a complex tree.

mod alphabet;
mod similarity;
mod word;

pub use alphabet::Alphabet;
pub use similarity::Similarity;
pub use word::{
    post_critical_set, EpWord, EpWordJson, FiniteWord, Relation, RelationJson, MAX_WORD_LEN,
};
