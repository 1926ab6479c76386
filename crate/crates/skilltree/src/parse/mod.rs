//! Parser for the curriculum definition language.
//!
//! The language is a flat list of statements:
//!
//! ```text
//! skill solve_linear_equation "Solve a linear equation" {
//!     requires: move_term, expand_brackets
//!     uses: equation            # concepts this skill depends on
//!     tags: algebra, core
//!     covered
//! }
//! concept equation "Equation" { requires: expression }
//! exercise ex1 "Warm-up" { tests: solve_linear_equation }
//! course "Algebra 1" {
//!     prerequisite: expression
//!     goal: solve_linear_equation
//! }
//! ```
//!
//! `requires` expresses skill-to-skill or concept-to-concept dependencies
//! (depending on the enclosing statement), `uses` the skill-to-concept kind
//! and is only legal inside `skill` bodies.
//!
//! [`parse`] never gives up on the first problem: every lex or syntax error
//! becomes a diagnostic (`E001`/`E002`) and parsing resumes at the next
//! statement keyword, so one malformed statement cannot hide problems in the
//! rest of the file. Statements that fail halfway through keep the parts
//! that were already read; later references to them then still resolve.

mod lexer;

pub use lexer::{tokenize, LexError, Token, TokenKind};

use std::collections::BTreeSet;

use crate::diag::{catalog, Diagnostic, Severity, SourceLocation};
use crate::graph::{CourseDecl, EdgeDecl, EdgeKind, ExerciseDecl, NodeDecl, NodeKind};

/// Everything a source file declared, in declaration order, plus the
/// diagnostics produced along the way. Feed the declaration lists to
/// [`crate::graph::build_graph`] and [`crate::graph::resolve_course`] to get
/// a validated graph.
#[derive(Debug, Default)]
pub struct ParseResult {
    pub nodes: Vec<NodeDecl>,
    pub edges: Vec<EdgeDecl>,
    pub exercises: Vec<ExerciseDecl>,
    pub courses: Vec<CourseDecl>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseResult {
    pub fn has_errors(&self) -> bool {
        crate::diag::has_errors(&self.diagnostics)
    }
}

/// Parses a source file. `file` is only used to label source locations.
pub fn parse(src: &str, file: &str) -> ParseResult {
    // Lex the whole input up front; lex errors become diagnostics and the
    // offending characters simply don't produce tokens.
    let mut lexer = lexer::Lexer::new(src, file);
    let mut tokens = Vec::new();
    let mut diagnostics = Vec::new();
    while let Some(token) = lexer.next_token() {
        match token {
            Ok(token) => tokens.push(token),
            Err(err) => diagnostics.push(
                Diagnostic::new(catalog::E001, Severity::Error, err.message).at(err.location),
            ),
        }
    }
    let eof = lexer.eof_location();

    let mut parser = Parser {
        tokens,
        pos: 0,
        eof,
        result: ParseResult { diagnostics, ..ParseResult::default() },
        edges_seen: BTreeSet::new(),
    };
    parser.file();
    parser.result
}

/// Marker for "this statement is beyond saving"; the caller skips to the
/// next statement keyword.
struct Abort;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    eof: SourceLocation,
    result: ParseResult,
    /// Edge facts already recorded, for duplicate detection (W001).
    edges_seen: BTreeSet<(String, String, EdgeKind)>,
}

impl Parser {
    fn file(&mut self) {
        while let Some(token) = self.peek() {
            let outcome = match token.kind {
                TokenKind::Skill => self.node_statement(NodeKind::Skill),
                TokenKind::Concept => self.node_statement(NodeKind::Concept),
                TokenKind::Exercise => self.exercise_statement(),
                TokenKind::Course => self.course_statement(),
                _ => {
                    let message = format!(
                        "expected `skill`, `concept`, `exercise` or `course`, found {}",
                        token.kind
                    );
                    self.syntax_error(message, token.location.clone());
                    Err(Abort)
                }
            };
            if outcome.is_err() {
                self.recover();
            }
        }
    }

    /// Skips ahead to the next token that can start a statement. The failed
    /// statement has always consumed at least its own keyword, so this makes
    /// progress even when the error sits right on the next statement.
    fn recover(&mut self) {
        while let Some(token) = self.peek() {
            if token.kind.starts_statement() {
                return;
            }
            self.pos += 1;
        }
    }

    // ----- statements -------------------------------------------------

    fn node_statement(&mut self, kind: NodeKind) -> Result<(), Abort> {
        self.advance(); // `skill` / `concept`
        let (id, id_location) = self.expect_node_id("node id")?;
        let title = self.expect_string("title")?;
        let mut decl = NodeDecl {
            id: id.clone(),
            kind,
            title,
            tags: BTreeSet::new(),
            attested_covered: false,
            location: Some(id_location),
        };

        if self.eat(&TokenKind::LBrace) {
            loop {
                let Some(token) = self.peek() else {
                    self.syntax_error(
                        "expected clause or `}`, found end of input",
                        self.eof.clone(),
                    );
                    self.result.nodes.push(decl);
                    return Err(Abort);
                };
                let clause_location = token.location.clone();
                let outcome = match token.kind {
                    TokenKind::RBrace => {
                        self.advance();
                        break;
                    }
                    TokenKind::Requires => {
                        // Dependency on nodes of the same kind.
                        let same_kind = match kind {
                            NodeKind::Skill => EdgeKind::Subskill,
                            NodeKind::Concept => EdgeKind::Subconcept,
                        };
                        self.edge_clause(&id, same_kind)
                    }
                    TokenKind::Uses => {
                        if kind == NodeKind::Concept {
                            self.syntax_error(
                                "`uses` is only allowed in skill bodies; concepts take `requires`",
                                clause_location,
                            );
                            // Still consume the clause so parsing continues.
                            self.advance();
                            self.expect(&TokenKind::Colon).and_then(|_| self.id_list()).map(|_| ())
                        } else {
                            self.edge_clause(&id, EdgeKind::ConceptRequirement)
                        }
                    }
                    TokenKind::Tags => {
                        self.advance();
                        self.expect(&TokenKind::Colon).and_then(|_| self.tag_list()).map(|tags| {
                            decl.tags.extend(tags);
                        })
                    }
                    TokenKind::Covered => {
                        self.advance();
                        decl.attested_covered = true;
                        Ok(())
                    }
                    _ => {
                        let message = format!(
                            "expected `requires`, `uses`, `tags`, `covered` or `}}`, found {}",
                            token.kind
                        );
                        self.syntax_error(message, clause_location);
                        Err(Abort)
                    }
                };
                if outcome.is_err() {
                    // Keep what was parsed so far; references to this node
                    // elsewhere should still resolve.
                    self.result.nodes.push(decl);
                    return Err(Abort);
                }
            }
        }

        self.result.nodes.push(decl);
        Ok(())
    }

    fn exercise_statement(&mut self) -> Result<(), Abort> {
        self.advance(); // `exercise`
        let (id, id_location) = self.expect_node_id("exercise id")?;
        let title = self.expect_string("title")?;
        self.expect(&TokenKind::LBrace)?;
        self.expect(&TokenKind::Tests)?;
        self.expect(&TokenKind::Colon)?;
        let tests = self.id_list()?;
        self.expect(&TokenKind::RBrace)?;
        self.result.exercises.push(ExerciseDecl {
            id,
            title,
            tests: tests.into_iter().map(|(id, loc)| (id, Some(loc))).collect(),
            location: Some(id_location),
        });
        Ok(())
    }

    fn course_statement(&mut self) -> Result<(), Abort> {
        let location = self.peek().map(|t| t.location.clone());
        self.advance(); // `course`
        let name = self.expect_string("course name")?;
        let mut decl = CourseDecl {
            name,
            prerequisites: Vec::new(),
            goals: Vec::new(),
            block_goals: Vec::new(),
            location,
        };
        self.expect(&TokenKind::LBrace)?;
        loop {
            let Some(token) = self.peek() else {
                self.syntax_error("expected clause or `}`, found end of input", self.eof.clone());
                self.result.courses.push(decl);
                return Err(Abort);
            };
            let clause_location = token.location.clone();
            let clause = match token.kind {
                TokenKind::RBrace => {
                    self.advance();
                    break;
                }
                TokenKind::Prerequisite => Some(Clause::Prerequisite),
                TokenKind::Goal => Some(Clause::Goal),
                TokenKind::BlockGoal => Some(Clause::BlockGoal),
                _ => None,
            };
            let Some(clause) = clause else {
                let message = format!(
                    "expected `prerequisite`, `goal`, `block-goal` or `}}`, found {}",
                    token.kind
                );
                self.syntax_error(message, clause_location);
                self.result.courses.push(decl);
                return Err(Abort);
            };
            self.advance();
            let refs = match self.expect(&TokenKind::Colon).and_then(|_| self.id_list()) {
                Ok(refs) => refs,
                Err(Abort) => {
                    self.result.courses.push(decl);
                    return Err(Abort);
                }
            };
            let refs = refs.into_iter().map(|(id, loc)| (id, Some(loc)));
            match clause {
                Clause::Prerequisite => decl.prerequisites.extend(refs),
                Clause::Goal => decl.goals.extend(refs),
                Clause::BlockGoal => decl.block_goals.extend(refs),
            }
        }
        self.result.courses.push(decl);
        Ok(())
    }

    // ----- clause helpers ----------------------------------------------

    /// Parses `requires:`/`uses:` id lists and records one edge per target,
    /// flagging duplicates (same source, target and kind) with W001.
    fn edge_clause(&mut self, from: &str, kind: EdgeKind) -> Result<(), Abort> {
        self.advance(); // clause keyword
        self.expect(&TokenKind::Colon)?;
        for (to, location) in self.id_list()? {
            if self.edges_seen.insert((from.to_owned(), to.clone(), kind)) {
                self.result.edges.push(EdgeDecl {
                    from: from.to_owned(),
                    to,
                    kind,
                    location: Some(location),
                });
            } else {
                self.result.diagnostics.push(
                    Diagnostic::new(
                        catalog::W001,
                        Severity::Warning,
                        format!("dependency of `{from}` on `{to}` is declared more than once"),
                    )
                    .with_nodes(vec![from.to_owned(), to])
                    .at(location),
                );
            }
        }
        Ok(())
    }

    /// Comma-separated node ids; a trailing comma is fine.
    fn id_list(&mut self) -> Result<Vec<(String, SourceLocation)>, Abort> {
        let mut ids = vec![self.expect_node_id("identifier")?];
        while self.eat(&TokenKind::Comma) {
            // A list may end with a comma, so only continue on a word.
            if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Word(_))) {
                ids.push(self.expect_node_id("identifier")?);
            } else {
                break;
            }
        }
        Ok(ids)
    }

    /// Like [`Self::id_list`] but hyphens are allowed: tags such as
    /// `type-concept` are words, not node references.
    fn tag_list(&mut self) -> Result<Vec<String>, Abort> {
        let mut tags = vec![self.expect_word("tag")?.0];
        while self.eat(&TokenKind::Comma) {
            if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Word(_))) {
                tags.push(self.expect_word("tag")?.0);
            } else {
                break;
            }
        }
        Ok(tags)
    }

    // ----- token plumbing ----------------------------------------------

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<&Token> {
        let token = self.tokens.get(self.pos);
        if token.is_some() {
            self.pos += 1;
        }
        token
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: &TokenKind) -> Result<(), Abort> {
        if self.eat(kind) {
            return Ok(());
        }
        let (found, location) = self.found();
        self.syntax_error(format!("expected {kind}, found {found}"), location);
        Err(Abort)
    }

    /// A word token; keywords are called out explicitly in the error.
    fn expect_word(&mut self, what: &str) -> Result<(String, SourceLocation), Abort> {
        if let Some(Token { kind: TokenKind::Word(word), location }) = self.peek() {
            let result = (word.clone(), location.clone());
            self.pos += 1;
            return Ok(result);
        }
        let (found, location) = self.found();
        self.syntax_error(format!("expected {what}, found {found}"), location);
        Err(Abort)
    }

    /// A word that must be a valid node id, i.e. no hyphens.
    fn expect_node_id(&mut self, what: &str) -> Result<(String, SourceLocation), Abort> {
        let (word, location) = self.expect_word(what)?;
        if word.contains('-') {
            self.syntax_error(
                format!("`{word}` is not a valid id: `-` is only allowed in tags"),
                location,
            );
            return Err(Abort);
        }
        Ok((word, location))
    }

    fn expect_string(&mut self, what: &str) -> Result<String, Abort> {
        if let Some(Token { kind: TokenKind::Str(value), .. }) = self.peek() {
            let value = value.clone();
            self.pos += 1;
            return Ok(value);
        }
        let (found, location) = self.found();
        self.syntax_error(format!("expected {what} string, found {found}"), location);
        Err(Abort)
    }

    /// Description and location of the current token, for error messages.
    fn found(&self) -> (String, SourceLocation) {
        match self.peek() {
            Some(token) => (token.kind.to_string(), token.location.clone()),
            None => ("end of input".into(), self.eof.clone()),
        }
    }

    fn syntax_error(&mut self, message: impl Into<String>, location: SourceLocation) {
        self.result
            .diagnostics
            .push(Diagnostic::new(catalog::E002, Severity::Error, message).at(location));
    }
}

enum Clause {
    Prerequisite,
    Goal,
    BlockGoal,
}
