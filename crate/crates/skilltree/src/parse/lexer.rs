//! Tokenizer for the curriculum definition language.
//!
//! Tokens are keywords, identifiers, double-quoted strings and the
//! punctuation `{ } : ,`. `#` starts a comment running to the end of the
//! line. Strings know two escapes, `\"` and `\\`, and may not span lines.
//! Locations are 1-based and count characters, not bytes.

use std::fmt;

use thiserror::Error;

use crate::diag::SourceLocation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub location: SourceLocation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    // Statement keywords.
    Skill,
    Concept,
    Exercise,
    Course,
    // Clause keywords.
    Requires,
    Uses,
    Tests,
    Goal,
    BlockGoal,
    Prerequisite,
    Tags,
    Covered,
    /// Identifier-shaped word. May contain `-` so that hyphenated tags like
    /// `type-concept` work; positions that need a node id reject the hyphen.
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    Colon,
    Comma,
}

impl TokenKind {
    fn keyword(word: &str) -> Option<TokenKind> {
        Some(match word {
            "skill" => TokenKind::Skill,
            "concept" => TokenKind::Concept,
            "exercise" => TokenKind::Exercise,
            "course" => TokenKind::Course,
            "requires" => TokenKind::Requires,
            "uses" => TokenKind::Uses,
            "tests" => TokenKind::Tests,
            "goal" => TokenKind::Goal,
            "block-goal" => TokenKind::BlockGoal,
            "prerequisite" => TokenKind::Prerequisite,
            "tags" => TokenKind::Tags,
            "covered" => TokenKind::Covered,
            _ => return None,
        })
    }

    /// True for the keywords that can open a top-level statement; error
    /// recovery skips ahead to one of these.
    pub fn starts_statement(&self) -> bool {
        matches!(
            self,
            TokenKind::Skill | TokenKind::Concept | TokenKind::Exercise | TokenKind::Course
        )
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Skill => f.write_str("keyword `skill`"),
            TokenKind::Concept => f.write_str("keyword `concept`"),
            TokenKind::Exercise => f.write_str("keyword `exercise`"),
            TokenKind::Course => f.write_str("keyword `course`"),
            TokenKind::Requires => f.write_str("keyword `requires`"),
            TokenKind::Uses => f.write_str("keyword `uses`"),
            TokenKind::Tests => f.write_str("keyword `tests`"),
            TokenKind::Goal => f.write_str("keyword `goal`"),
            TokenKind::BlockGoal => f.write_str("keyword `block-goal`"),
            TokenKind::Prerequisite => f.write_str("keyword `prerequisite`"),
            TokenKind::Tags => f.write_str("keyword `tags`"),
            TokenKind::Covered => f.write_str("keyword `covered`"),
            TokenKind::Word(w) => write!(f, "identifier `{w}`"),
            TokenKind::Str(_) => f.write_str("string"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Comma => f.write_str("`,`"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{location}: {message}")]
pub struct LexError {
    pub message: String,
    pub location: SourceLocation,
}

/// Tokenizes a whole file, stopping at the first problem. The parser uses
/// the incremental [`Lexer`] instead so it can keep going past bad input.
pub fn tokenize(src: &str, file: &str) -> Result<Vec<Token>, LexError> {
    let mut lexer = Lexer::new(src, file);
    let mut tokens = Vec::new();
    while let Some(token) = lexer.next_token() {
        tokens.push(token?);
    }
    Ok(tokens)
}

pub(crate) struct Lexer<'a> {
    file: &'a str,
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(src: &'a str, file: &'a str) -> Self {
        Self { file, chars: src.chars().peekable(), line: 1, column: 1 }
    }

    fn location(&self) -> SourceLocation {
        SourceLocation::new(self.file, self.line, self.column)
    }

    /// Location just past the final character; used for end-of-input errors.
    pub(crate) fn eof_location(&self) -> SourceLocation {
        self.location()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn is_word_char(c: char) -> bool {
        c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-'
    }

    pub(crate) fn next_token(&mut self) -> Option<Result<Token, LexError>> {
        loop {
            let c = *self.chars.peek()?;
            let location = self.location();
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '#' => {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.bump();
                    }
                }
                '{' | '}' | ':' | ',' => {
                    self.bump();
                    let kind = match c {
                        '{' => TokenKind::LBrace,
                        '}' => TokenKind::RBrace,
                        ':' => TokenKind::Colon,
                        _ => TokenKind::Comma,
                    };
                    return Some(Ok(Token { kind, location }));
                }
                '"' => return Some(self.string(location)),
                c if c.is_ascii_lowercase() || c == '_' => {
                    return Some(Ok(self.word(location)));
                }
                c if c.is_ascii_digit() => {
                    // Consume the whole run so recovery does not stumble
                    // over it character by character.
                    while self.chars.peek().is_some_and(|&c| Self::is_word_char(c)) {
                        self.bump();
                    }
                    return Some(Err(LexError {
                        message: "identifiers may not start with a digit".into(),
                        location,
                    }));
                }
                c => {
                    self.bump();
                    return Some(Err(LexError {
                        message: format!("illegal character `{c}`"),
                        location,
                    }));
                }
            }
        }
    }

    fn word(&mut self, location: SourceLocation) -> Token {
        let mut word = String::new();
        while self.chars.peek().is_some_and(|&c| Self::is_word_char(c)) {
            word.push(self.bump().unwrap());
        }
        let kind = TokenKind::keyword(&word).unwrap_or(TokenKind::Word(word));
        Token { kind, location }
    }

    fn string(&mut self, open: SourceLocation) -> Result<Token, LexError> {
        self.bump(); // opening quote
        let mut value = String::new();
        loop {
            match self.chars.peek() {
                None | Some('\n') => {
                    return Err(LexError { message: "unterminated string".into(), location: open });
                }
                Some('"') => {
                    self.bump();
                    return Ok(Token { kind: TokenKind::Str(value), location: open });
                }
                Some('\\') => {
                    let escape = self.location();
                    self.bump();
                    match self.bump() {
                        Some('"') => value.push('"'),
                        Some('\\') => value.push('\\'),
                        Some(c) => {
                            return Err(LexError {
                                message: format!(
                                    "unknown escape `\\{c}` (only `\\\"` and `\\\\` exist)"
                                ),
                                location: escape,
                            });
                        }
                        None => {
                            return Err(LexError {
                                message: "unterminated string".into(),
                                location: open,
                            });
                        }
                    }
                }
                Some(_) => value.push(self.bump().unwrap()),
            }
        }
    }
}
