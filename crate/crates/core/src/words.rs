//! Words over a finite alphabet: Lyndon words, their standard factorization,
//! and necklaces (cyclic words in minimal rotation).

use std::fmt;

use crate::error::{Error, Result};

/// Letter names by index. The first three match the usual `x, y, z`.
pub const LETTERS: &[u8] = b"xyzabcdefghijklmnopqrstuvw";

pub type Word = Vec<u8>;

pub fn letter_name(i: u8) -> char {
    LETTERS[i as usize] as char
}

pub fn word_to_string(w: &[u8]) -> String {
    w.iter().map(|&c| letter_name(c)).collect()
}

pub fn parse_word(text: &str, alphabet: usize) -> Result<Word> {
    text.chars()
        .map(|c| {
            LETTERS
                .iter()
                .take(alphabet)
                .position(|&l| l as char == c)
                .map(|p| p as u8)
                .ok_or_else(|| Error::UnknownLetter(c.to_string()))
        })
        .collect()
}

pub fn is_lyndon(w: &[u8]) -> bool {
    let n = w.len();
    n > 0 && (1..n).all(|i| w < &rotate(w, i)[..])
}

fn rotate(w: &[u8], i: usize) -> Word {
    w[i..].iter().chain(&w[..i]).copied().collect()
}

/// Lexicographically minimal rotation (Booth-free quadratic scan; words here
/// are short).
pub fn min_rotation(w: &[u8]) -> Word {
    (0..w.len().max(1))
        .map(|i| if w.is_empty() { Vec::new() } else { rotate(w, i) })
        .min()
        .unwrap_or_default()
}

/// A Lyndon word together with its standard factorization `w = uv`, where
/// `v` is the longest proper Lyndon suffix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LyndonWord {
    letters: Word,
    split: usize,
}

impl LyndonWord {
    pub fn new(letters: Word) -> Result<Self> {
        if !is_lyndon(&letters) {
            return Err(Error::Invalid(format!(
                "{} is not a Lyndon word",
                word_to_string(&letters)
            )));
        }
        let split = if letters.len() == 1 {
            0
        } else {
            (1..letters.len())
                .find(|&i| is_lyndon(&letters[i..]))
                .expect("a single trailing letter is always Lyndon")
        };
        Ok(LyndonWord { letters, split })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `None` for a single letter.
    pub fn factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        if self.letters.len() == 1 {
            return None;
        }
        let (u, v) = self.letters.split_at(self.split);
        Some((
            LyndonWord::new(u.to_vec()).expect("left factor is Lyndon"),
            LyndonWord::new(v.to_vec()).expect("right factor is Lyndon"),
        ))
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_to_string(&self.letters))
    }
}

impl fmt::Debug for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lyndon({self})")
    }
}

/// All Lyndon words of the given length, in lexicographic order (Duval's
/// generation algorithm).
pub fn lyndon_basis(degree: usize, alphabet: usize) -> Vec<LyndonWord> {
    let mut out = Vec::new();
    if degree == 0 || alphabet == 0 {
        return out;
    }
    let k = alphabet as u8;
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        if w.len() == degree {
            out.push(LyndonWord::new(w.clone()).expect("Duval emits Lyndon words"));
        }
        let m = w.len();
        while w.len() < degree {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

fn mobius(n: usize) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt's formula `(1/n) Σ_{d|n} μ(d) k^{n/d}`.
pub fn witt_dimension(n: usize, alphabet: usize) -> usize {
    let sum: i64 = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mobius(d) * (alphabet as i64).pow((n / d) as u32))
        .sum();
    (sum / n as i64) as usize
}

/// Necklaces of the given length in lexicographic order.
pub fn necklaces(degree: usize, alphabet: usize) -> Vec<Word> {
    let mut out: Vec<Word> = all_words(degree, alphabet)
        .into_iter()
        .filter(|w| min_rotation(w) == *w)
        .collect();
    out.sort();
    out
}

pub fn all_words(degree: usize, alphabet: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..degree {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet as u8).map(move |c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bases() {
        let b1: Vec<String> = lyndon_basis(1, 2).iter().map(|w| w.to_string()).collect();
        assert_eq!(b1, ["x", "y"]);
        let b2: Vec<String> = lyndon_basis(2, 2).iter().map(|w| w.to_string()).collect();
        assert_eq!(b2, ["xy"]);
    }

    #[test]
    fn degree_five_matches_brute_force() {
        let brute: Vec<Word> = all_words(5, 2).into_iter().filter(|w| is_lyndon(w)).collect();
        assert_eq!(brute.len(), 6);
        let duval: Vec<Word> = lyndon_basis(5, 2).iter().map(|w| w.letters().to_vec()).collect();
        assert_eq!(duval, brute);
    }

    #[test]
    fn witt_formula_through_ten() {
        for n in 1..=10 {
            assert_eq!(lyndon_basis(n, 2).len(), witt_dimension(n, 2), "n = {n}");
        }
        assert_eq!(lyndon_basis(4, 3).len(), witt_dimension(4, 3));
    }

    #[test]
    fn standard_factorization() {
        let w = LyndonWord::new(parse_word("xxyxy", 2).unwrap()).unwrap();
        let (u, v) = w.factorization().unwrap();
        assert_eq!((u.to_string(), v.to_string()), ("xxy".into(), "xy".into()));
        let w = LyndonWord::new(parse_word("xyy", 2).unwrap()).unwrap();
        let (u, v) = w.factorization().unwrap();
        assert_eq!((u.to_string(), v.to_string()), ("xy".into(), "y".into()));
    }

    #[test]
    fn rejects_non_lyndon() {
        assert!(LyndonWord::new(vec![1, 0]).is_err());
        assert!(LyndonWord::new(vec![0, 0]).is_err());
    }

    #[test]
    fn necklace_canonical_form() {
        assert_eq!(word_to_string(&min_rotation(&parse_word("xyx", 2).unwrap())), "xxy");
        assert_eq!(necklaces(2, 2).len(), 3);
        assert_eq!(necklaces(4, 2).len(), 6);
    }

    #[test]
    fn unknown_letters() {
        assert!(parse_word("xq", 2).is_err());
        assert_eq!(parse_word("xyz", 3).unwrap(), vec![0, 1, 2]);
    }
}
