//! Action grammars and lenient answer extraction.
//!
//! Multi-turn environments parse actions strictly: the whole text must be one
//! command. The action-parser wrapper relaxes that by pulling the last
//! conforming command out of free text. Single-turn verifiers always extract
//! leniently, since models emit reasoning around their answers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Word(String),
    Int(i64),
    Punct(char),
}

/// Splits text into lowercase words, signed integers and punctuation.
/// Whitespace is dropped.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit()
            || (c == '-'
                && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())
                && (i == 0 || !chars[i - 1].is_alphanumeric()))
        {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            // saturate absurdly long digit runs instead of failing
            let v = s.parse::<i64>().unwrap_or(if c == '-' { i64::MIN } else { i64::MAX });
            out.push(Token::Int(v));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphabetic() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Word(s.to_lowercase()));
        } else {
            out.push(Token::Punct(c));
            i += 1;
        }
    }
    out
}

/// Last integer mentioned in `text`.
pub fn last_int(text: &str) -> Option<i64> {
    tokenize(text).into_iter().rev().find_map(|t| match t {
        Token::Int(v) => Some(v),
        _ => None,
    })
}

/// Final maximal run of integers. Punctuation (commas, arrows, dashes,
/// brackets) may separate members; any word ends a run.
pub fn last_int_run(text: &str) -> Option<Vec<i64>> {
    let mut runs: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for t in tokenize(text) {
        match t {
            Token::Int(v) => current.push(v),
            Token::Punct(_) => {}
            Token::Word(_) => {
                if !current.is_empty() {
                    runs.push(core::mem::take(&mut current));
                }
            }
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    runs.pop()
}

/// All `(a, b)` integer pairs written with parentheses, in order.
pub fn paren_pairs(text: &str) -> Vec<(i64, i64)> {
    let toks = tokenize(text);
    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if let [Token::Punct('('), Token::Int(a), rest @ ..] = &toks[i..] {
            let rest: Vec<&Token> = rest.iter().take(3).collect();
            match rest.as_slice() {
                [Token::Punct(','), Token::Int(b), Token::Punct(')'), ..] => {
                    out.push((*a, *b));
                    i += 5;
                    continue;
                }
                [Token::Int(b), Token::Punct(')'), ..] => {
                    out.push((*a, *b));
                    i += 4;
                    continue;
                }
                _ => {}
            }
        }
        i += 1;
    }
    out
}

/// Every decimal digit in `text`, in order.
pub fn digits(text: &str) -> Vec<u8> {
    text.chars().filter_map(|c| c.to_digit(10).map(|d| d as u8)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Down, Direction::Left, Direction::Right];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
            Direction::Left => "left",
            Direction::Right => "right",
        }
    }

    pub fn from_word(w: &str) -> Option<Direction> {
        match w {
            "up" => Some(Direction::Up),
            "down" => Some(Direction::Down),
            "left" => Some(Direction::Left),
            "right" => Some(Direction::Right),
            _ => None,
        }
    }
}

/// Command grammars of the multi-turn environments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grammar {
    /// `up | down | left | right`
    Direction,
    /// `reveal <row> <col>`
    Reveal,
    /// `place <row> <col>`
    Place,
}

/// A grammar-conformant command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Move(Direction),
    Reveal(i64, i64),
    Place(i64, i64),
}

impl Command {
    pub fn canonical(&self) -> String {
        match self {
            Command::Move(d) => d.name().to_string(),
            Command::Reveal(r, c) => format!("reveal {r} {c}"),
            Command::Place(r, c) => format!("place {r} {c}"),
        }
    }
}

impl Grammar {
    pub fn describe(self) -> &'static str {
        match self {
            Grammar::Direction => "up|down|left|right",
            Grammar::Reveal => "reveal <row> <col>",
            Grammar::Place => "place <row> <col>",
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Grammar::Direction => "",
            Grammar::Reveal => "reveal",
            Grammar::Place => "place",
        }
    }

    /// All matches in order of appearance.
    fn matches(self, toks: &[Token]) -> Vec<(usize, usize, Command)> {
        let mut out = Vec::new();
        let words: Vec<(usize, &Token)> = toks
            .iter()
            .enumerate()
            .filter(|(_, t)| !matches!(t, Token::Punct(_)))
            .collect();
        for (wi, (ti, t)) in words.iter().enumerate() {
            match (self, t) {
                (Grammar::Direction, Token::Word(w)) => {
                    if let Some(d) = Direction::from_word(w) {
                        out.push((*ti, *ti, Command::Move(d)));
                    }
                }
                (Grammar::Reveal | Grammar::Place, Token::Word(w)) if w == self.keyword() => {
                    if let (Some((_, Token::Int(r))), Some((end, Token::Int(c)))) =
                        (words.get(wi + 1), words.get(wi + 2))
                    {
                        let cmd = if self == Grammar::Reveal {
                            Command::Reveal(*r, *c)
                        } else {
                            Command::Place(*r, *c)
                        };
                        out.push((*ti, *end, cmd));
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// The whole text (ignoring case, whitespace and punctuation) must be
    /// exactly one command.
    pub fn parse_strict(self, text: &str) -> Option<Command> {
        let toks: Vec<Token> = tokenize(text)
            .into_iter()
            .filter(|t| !matches!(t, Token::Punct(_)))
            .collect();
        let m = self.matches(&toks);
        match m.as_slice() {
            [(0, end, cmd)] if *end + 1 == toks.len() => Some(*cmd),
            _ => None,
        }
    }

    /// Last conforming command anywhere in free text.
    pub fn extract_last(self, text: &str) -> Option<Command> {
        self.matches(&tokenize(text)).last().map(|m| m.2)
    }
}
