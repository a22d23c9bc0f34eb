//! Bracketed f-structures.
//!
//! An f-structure is written as `[label item*]` where every item is either a
//! bare word token or a nested structure:
//!
//! ```text
//! [sentence [subj I] would [xcomp [subj I] register [pp-adj for the conference]]]
//! ```
//!
//! Labels and tokens are case-folded to lowercase while parsing. Item order is
//! kept exactly as written, so [`FStructure::serialize`] only normalizes case
//! and whitespace.

use std::fmt;
use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

/// Errors produced while reading bracketed text. Positions are character
/// offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unbalanced brackets at position {0}")]
    UnbalancedBrackets(usize),
    #[error("structure without a label at position {0}")]
    EmptyStructure(usize),
    #[error("illegal character at position {0}")]
    IllegalCharacter(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("structure [{label}] has no head token at its own level")]
pub struct NoHead {
    pub label: String,
}

/// One element inside a structure, in source order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Item {
    Token(String),
    Sub(FStructure),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FStructure {
    label: String,
    items: Vec<Item>,
}

/// The lexical head of a structure: the last bare token at its own level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Head(String);

impl Head {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

pub fn is_valid_token(token: &str) -> bool {
    !token.is_empty()
        && !token
            .chars()
            .any(|c| c.is_whitespace() || c == '[' || c == ']')
}

impl FStructure {
    /// Builds a structure from parts, folding case. Returns `None` when the
    /// label or a token violates the grammar.
    pub fn new(label: &str, items: Vec<Item>) -> Option<Self> {
        let label = label.to_lowercase();
        if !is_valid_label(&label) {
            return None;
        }
        let mut folded = Vec::with_capacity(items.len());
        for item in items {
            match item {
                Item::Token(t) => {
                    let t = t.to_lowercase();
                    if !is_valid_token(&t) {
                        return None;
                    }
                    folded.push(Item::Token(t));
                }
                Item::Sub(s) => folded.push(Item::Sub(s)),
            }
        }
        Some(FStructure {
            label,
            items: folded,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut parser = Parser::new(text);
        parser.skip_ws();
        if parser.peek().is_none() {
            return Err(ParseError::EmptyStructure(parser.offset()));
        }
        let fs = parser.structure()?;
        parser.skip_ws();
        match parser.peek() {
            None => Ok(fs),
            Some(']') => Err(ParseError::UnbalancedBrackets(parser.offset())),
            Some(_) => Err(ParseError::IllegalCharacter(parser.offset())),
        }
    }

    /// Parses a whitespace-separated sequence of top-level structures.
    pub fn parse_many(text: &str) -> Result<Vec<Self>, ParseError> {
        let mut parser = Parser::new(text);
        let mut out = Vec::new();
        loop {
            parser.skip_ws();
            match parser.peek() {
                None => return Ok(out),
                Some(']') => return Err(ParseError::UnbalancedBrackets(parser.offset())),
                Some('[') => out.push(parser.structure()?),
                Some(_) => return Err(ParseError::IllegalCharacter(parser.offset())),
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// Bare tokens at this level, in order.
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.items.iter().filter_map(|i| match i {
            Item::Token(t) => Some(t.as_str()),
            Item::Sub(_) => None,
        })
    }

    /// Immediate sub-structures, in order.
    pub fn subs(&self) -> impl Iterator<Item = &FStructure> {
        self.items.iter().filter_map(|i| match i {
            Item::Sub(s) => Some(s),
            Item::Token(_) => None,
        })
    }

    pub fn head(&self) -> Result<Head, NoHead> {
        self.tokens()
            .last()
            .map(|t| Head(t.to_string()))
            .ok_or_else(|| NoHead {
                label: self.label.clone(),
            })
    }

    /// Every head in the tree, preorder.
    pub fn all_heads(&self) -> Vec<Head> {
        let mut out = Vec::new();
        self.walk(&mut |fs| {
            if let Ok(h) = fs.head() {
                out.push(h);
            }
        });
        out
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a FStructure)) {
        f(self);
        for s in self.subs() {
            s.walk(f);
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.subs().map(FStructure::depth).max().unwrap_or(0)
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

/// Free-function alias of [`FStructure::head`].
pub fn head_of(fs: &FStructure) -> Result<Head, NoHead> {
    fs.head()
}

impl fmt::Display for FStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.label)?;
        for item in &self.items {
            match item {
                Item::Token(t) => write!(f, " {t}")?,
                Item::Sub(s) => write!(f, " {s}")?,
            }
        }
        f.write_str("]")
    }
}

impl std::str::FromStr for FStructure {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FStructure::parse(s)
    }
}

struct Parser<'a> {
    chars: Peekable<CharIndices<'a>>,
    // char offset of the next unread character
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.char_indices().peekable(),
            pos: 0,
        }
    }

    fn offset(&self) -> usize {
        self.pos
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next().map(|(_, c)| c);
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '[' || c == ']' {
                break;
            }
            w.push(c);
            self.bump();
        }
        w
    }

    fn structure(&mut self) -> Result<FStructure, ParseError> {
        let open = self.offset();
        match self.bump() {
            Some('[') => {}
            Some(']') => return Err(ParseError::UnbalancedBrackets(open)),
            Some(_) => return Err(ParseError::IllegalCharacter(open)),
            None => return Err(ParseError::UnbalancedBrackets(open)),
        }
        self.skip_ws();
        let label_start = self.offset();
        match self.peek() {
            None => return Err(ParseError::UnbalancedBrackets(label_start)),
            Some('[') | Some(']') => return Err(ParseError::EmptyStructure(open)),
            Some(_) => {}
        }
        let label = self.word();
        if let Some(bad) = label
            .chars()
            .enumerate()
            .find(|&(k, c)| {
                if k == 0 {
                    !c.is_ascii_alphabetic()
                } else {
                    !(c.is_ascii_alphanumeric() || c == '_' || c == '-')
                }
            })
            .map(|(k, _)| k)
        {
            return Err(ParseError::IllegalCharacter(label_start + bad));
        }

        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(ParseError::UnbalancedBrackets(self.offset())),
                Some(']') => {
                    self.bump();
                    break;
                }
                Some('[') => items.push(Item::Sub(self.structure()?)),
                Some(_) => items.push(Item::Token(self.word().to_lowercase())),
            }
        }
        Ok(FStructure {
            label: label.to_lowercase(),
            items,
        })
    }
}
