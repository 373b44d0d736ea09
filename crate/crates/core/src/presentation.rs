//! Group presentations `< X | R >` and free-group word algebra.
//!
//! Words are always stored freely reduced. The text grammar is
//!
//! ```text
//! presentation := "<" gens "|" rels ">"
//! gens         := [ident {"," ident}]
//! rels         := [word {"," word}]
//! word         := {factor}
//! factor       := (ident | "(" word ")" | "[" word "," word "]") ["^" signed-int]
//! ident        := letter {letter | digit | "_"}
//! ```
//!
//! `[u,v]` expands to `u v u^-1 v^-1`. Names are case sensitive and there is
//! no uppercase-inverse shorthand. A relator that is syntactically empty is
//! rejected; the identity relator is written `()`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Upper bound on the number of letters a single parsed word may expand to.
pub const MAX_WORD_LEN: usize = 1 << 20;

/// Maximum nesting depth of `(..)` and `[..]` groups in the parser.
pub const MAX_NESTING: usize = 128;

/// One signed generator occurrence `x_g^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub const fn pos(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub const fn neg(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    pub const fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    /// `+1` or `-1`.
    pub const fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced element of the free group on generators `0..n`.
///
/// The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

/// Freely reduce an arbitrary letter sequence.
pub fn free_reduce(letters: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        match out.last() {
            Some(&top) if top.cancels(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

/// `a b a^-1 b^-1`, freely reduced.
pub fn expand_commutator(a: &Word, b: &Word) -> Word {
    a.concat(b).concat(&a.invert()).concat(&b.invert())
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let v: Vec<Letter> = letters.into_iter().collect();
        free_reduce(&v)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        // Both halves are reduced, so cancellation only happens at the seam.
        let mut overlap = 0;
        while overlap < self.0.len()
            && overlap < other.0.len()
            && self.0[self.0.len() - 1 - overlap].cancels(other.0[overlap])
        {
            overlap += 1;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len() - 2 * overlap);
        out.extend_from_slice(&self.0[..self.0.len() - overlap]);
        out.extend_from_slice(&other.0[overlap..]);
        Word(out)
    }

    /// Splits `w = u c u^-1` with `c` cyclically reduced.
    fn cyclic_split(&self) -> (usize, &[Letter]) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k].cancels(self.0[n - 1 - k]) {
            k += 1;
        }
        (k, &self.0[k..n - k])
    }

    /// `w^k` for any integer `k`; `w^0` is the identity.
    pub fn power(&self, k: i64) -> Word {
        if k == 0 || self.is_empty() {
            return Word::identity();
        }
        let base = if k < 0 { self.invert() } else { self.clone() };
        let reps = k.unsigned_abs() as usize;
        let (prefix, core) = base.cyclic_split();
        let mut out = Vec::with_capacity(2 * prefix + core.len() * reps);
        out.extend_from_slice(&base.0[..prefix]);
        for _ in 0..reps {
            out.extend_from_slice(core);
        }
        out.extend_from_slice(&base.0[base.0.len() - prefix..]);
        Word(out)
    }

    /// Sum of the signs of every occurrence of generator `g`.
    pub fn exponent_sum(&self, g: usize) -> i64 {
        self.0.iter().filter(|l| l.generator == g).map(|l| l.sign()).sum()
    }

    /// Number of occurrences of generator `g`, either sign.
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|l| l.generator == g).count()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Letter-by-letter form, e.g. `x x x y^-1 y^-1`; the identity is `1`.
    pub fn spelled<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let name = names[l.generator].as_ref();
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.to_string()
                }
            })
            .collect();
        parts.join(" ")
    }

    /// Syllable form with exponents collected, e.g. `x^3 y^-2`; the identity is `()`.
    pub fn compact<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.is_empty() {
            return "()".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let exp = (j - i) as i64 * l.sign();
            let name = names[l.generator].as_ref();
            if exp == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i = j;
        }
        parts.join(" ")
    }
}

/// A named generator of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub index: usize,
    pub name: String,
}

/// `< X | R >` with relators freely reduced. Empty relators are kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("relator {relator} uses generator index {generator} but only {count} generators exist")]
    LetterOutOfRange {
        relator: usize,
        generator: usize,
        count: usize,
    },
}

fn is_ident(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl Presentation {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        relators: Vec<Word>,
    ) -> Result<Self, PresentationError> {
        let mut generators: Vec<Generator> = Vec::new();
        for (index, name) in names.into_iter().enumerate() {
            let name = name.into();
            if !is_ident(&name) {
                return Err(PresentationError::InvalidName(name));
            }
            if generators.iter().any(|g| g.name == name) {
                return Err(PresentationError::DuplicateName(name));
            }
            generators.push(Generator { index, name });
        }
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(PresentationError::LetterOutOfRange {
                        relator: i,
                        generator: g,
                        count: generators.len(),
                    });
                }
            }
        }
        Ok(Presentation { generators, relators })
    }

    /// `< x1, ..., xn | >`.
    pub fn free(n: usize) -> Self {
        Presentation::new((1..=n).map(|i| format!("x{i}")), Vec::new())
            .expect("generated names are distinct identifiers")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `n = |X|`, unused generators included.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn spell(&self, w: &Word) -> String {
        w.spelled(&self.names())
    }

    /// Parses a single word over this presentation's generators, e.g. `x x y^-1`.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let names: HashMap<String, usize> = self.generators.iter().map(|g| (g.name.clone(), g.index)).collect();
        let mut p = Parser::new(text);
        p.names = names;
        p.skip_ws();
        let w = if p.peek() == Some(b'1') {
            p.pos += 1;
            Word::identity()
        } else {
            p.word(0)?
        };
        p.skip_ws();
        p.expect_end()?;
        Ok(w)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        let rels: Vec<String> = self.relators.iter().map(|r| r.compact(&names)).collect();
        match (names.is_empty(), rels.is_empty()) {
            (true, true) => write!(f, "< | >"),
            (false, true) => write!(f, "< {} | >", names.join(", ")),
            (true, false) => write!(f, "< | {} >", rels.join(", ")),
            (false, false) => write!(f, "< {} | {} >", names.join(", "), rels.join(", ")),
        }
    }
}

impl std::str::FromStr for Presentation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_presentation(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: &'static str,
        found: String,
    },
    #[error("unknown generator `{name}` at byte {position}")]
    UnknownGenerator { name: String, position: usize },
    #[error("duplicate generator `{name}` at byte {position}")]
    DuplicateGenerator { name: String, position: usize },
    #[error("relators given but no generators declared (byte {position})")]
    NoGenerators { position: usize },
    #[error("exponent out of range at byte {position}")]
    ExponentOverflow { position: usize },
    #[error("word expands past {MAX_WORD_LEN} letters at byte {position}")]
    WordTooLong { position: usize },
    #[error("groups nested deeper than {MAX_NESTING} at byte {position}")]
    TooDeep { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownGenerator { position, .. }
            | ParseError::DuplicateGenerator { position, .. }
            | ParseError::NoGenerators { position }
            | ParseError::ExponentOverflow { position }
            | ParseError::WordTooLong { position }
            | ParseError::TooDeep { position } => *position,
        }
    }
}

/// Parses presentation text into generators and freely reduced relators.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut p = Parser::new(text);
    p.skip_ws();
    p.expect(b'<', "`<`")?;

    let mut generators = Vec::new();
    p.skip_ws();
    if p.peek() != Some(b'|') {
        loop {
            p.skip_ws();
            let at = p.pos;
            let name = p.ident()?;
            if p.names.contains_key(&name) {
                return Err(ParseError::DuplicateGenerator { name, position: at });
            }
            p.names.insert(name.clone(), generators.len());
            generators.push(Generator {
                index: generators.len(),
                name,
            });
            p.skip_ws();
            match p.peek() {
                Some(b',') => p.pos += 1,
                _ => break,
            }
        }
    }
    p.skip_ws();
    p.expect(b'|', "`,` or `|`")?;

    let mut relators = Vec::new();
    p.skip_ws();
    if p.peek() != Some(b'>') {
        if generators.is_empty() {
            return Err(ParseError::NoGenerators { position: p.pos });
        }
        loop {
            p.skip_ws();
            let at = p.pos;
            let (w, factors) = p.word_counted(0)?;
            if factors == 0 {
                return Err(p.syntax_at(at, "relator"));
            }
            relators.push(w);
            p.skip_ws();
            match p.peek() {
                Some(b',') => p.pos += 1,
                _ => break,
            }
        }
    }
    p.skip_ws();
    p.expect(b'>', "`,` or `>`")?;
    p.skip_ws();
    p.expect_end()?;

    Ok(Presentation { generators, relators })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: HashMap<String, usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            names: HashMap::new(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn found(&self, at: usize) -> String {
        match self.src[at..].chars().next() {
            Some(c) => format!("`{}`", c.escape_debug()),
            None => "end of input".to_string(),
        }
    }

    fn syntax_at(&self, at: usize, expected: &'static str) -> ParseError {
        ParseError::Syntax {
            position: at,
            expected,
            found: self.found(at),
        }
    }

    fn expect(&mut self, b: u8, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax_at(self.pos, expected))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.syntax_at(self.pos, "end of input"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() => self.pos += 1,
            _ => return Err(self.syntax_at(start, "identifier")),
        }
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn word(&mut self, depth: usize) -> Result<Word, ParseError> {
        self.word_counted(depth).map(|(w, _)| w)
    }

    fn word_counted(&mut self, depth: usize) -> Result<(Word, usize), ParseError> {
        let mut acc = Word::identity();
        let mut factors = 0;
        loop {
            self.skip_ws();
            let at = self.pos;
            let base = match self.peek() {
                Some(b) if b.is_ascii_alphabetic() => {
                    let name = self.ident()?;
                    match self.names.get(&name) {
                        Some(&g) => Word::generator(g),
                        None => return Err(ParseError::UnknownGenerator { name, position: at }),
                    }
                }
                Some(b'(') => {
                    if depth >= MAX_NESTING {
                        return Err(ParseError::TooDeep { position: at });
                    }
                    self.pos += 1;
                    let w = self.word(depth + 1)?;
                    self.skip_ws();
                    self.expect(b')', "`)`")?;
                    w
                }
                Some(b'[') => {
                    if depth >= MAX_NESTING {
                        return Err(ParseError::TooDeep { position: at });
                    }
                    self.pos += 1;
                    let a = self.word(depth + 1)?;
                    self.skip_ws();
                    self.expect(b',', "`,` inside commutator")?;
                    let b = self.word(depth + 1)?;
                    self.skip_ws();
                    self.expect(b']', "`]`")?;
                    if a.len() + b.len() > MAX_WORD_LEN / 2 {
                        return Err(ParseError::WordTooLong { position: at });
                    }
                    expand_commutator(&a, &b)
                }
                _ => break,
            };
            self.skip_ws();
            let factor = if self.peek() == Some(b'^') {
                self.pos += 1;
                let exp = self.signed_int()?;
                if (base.len() as u128) * (exp.unsigned_abs() as u128) > MAX_WORD_LEN as u128 {
                    return Err(ParseError::WordTooLong { position: at });
                }
                base.power(exp)
            } else {
                base
            };
            if acc.len() + factor.len() > MAX_WORD_LEN {
                return Err(ParseError::WordTooLong { position: at });
            }
            acc = acc.concat(&factor);
            factors += 1;
        }
        Ok((acc, factors))
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.syntax_at(self.pos, "integer exponent"));
        }
        let digits = &self.src[digits_start..self.pos];
        let magnitude: i64 = digits
            .parse()
            .map_err(|_| ParseError::ExponentOverflow { position: start })?;
        Ok(if negative { -magnitude } else { magnitude })
    }
}
