//! Recursive-descent parser for the math-mode subset.
//!
//! Spaces are significant and kept inside runs, except next to a line
//! break where they are dropped. A `{}` directly after an argument-less
//! control word terminates it and produces no node, so `\alpha{}x` is the
//! symbol followed by the run `x`.

use thiserror::Error;

use super::ast::{MathAst, Node};
use super::commands::CommandTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unsupported command {command} at {position}")]
    UnsupportedCommand { command: String, position: usize },
    #[error("unbalanced brace at {position}")]
    UnbalancedBrace { position: usize },
    #[error("{op} at {position} has no argument")]
    MissingScriptArgument { op: char, position: usize },
    #[error("double {op} at {position}")]
    DoubleScript { op: char, position: usize },
    #[error("{command} at {position} requires an argument")]
    MissingArgument { command: String, position: usize },
    #[error("unexpected character {ch:?} at {position}")]
    UnexpectedChar { ch: char, position: usize },
    #[error("dangling backslash at {position}")]
    DanglingBackslash { position: usize },
}

impl ParseError {
    /// Character offset of the error in the label.
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnsupportedCommand { position, .. }
            | ParseError::UnbalancedBrace { position }
            | ParseError::MissingScriptArgument { position, .. }
            | ParseError::DoubleScript { position, .. }
            | ParseError::MissingArgument { position, .. }
            | ParseError::UnexpectedChar { position, .. }
            | ParseError::DanglingBackslash { position } => *position,
        }
    }
}

/// Characters that can never appear in a run.
pub fn is_reserved(c: char) -> bool {
    matches!(
        c,
        '\\' | '{' | '}' | '^' | '_' | '$' | '%' | '&' | '#' | '~'
    )
}

/// Whether `c` may appear verbatim inside a run.
pub fn is_run_char(c: char) -> bool {
    c == ' ' || !(is_reserved(c) || c.is_control() || c.is_whitespace())
}

pub fn parse_label(text: &str) -> Result<MathAst, ParseError> {
    parse_with(text, CommandTable::builtin())
}

pub fn parse_with(text: &str, table: &CommandTable) -> Result<MathAst, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        table,
    };
    let items = parser.items(None)?;
    Ok(MathAst::new(Node::from_items(items)))
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    table: &'a CommandTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    /// Items up to the matching `}` (when `open` is the position of `{`) or
    /// end of input.
    fn items(&mut self, open: Option<usize>) -> Result<Vec<Node>, ParseError> {
        let mut items = Vec::new();
        let mut run = String::new();
        loop {
            let Some(c) = self.peek() else {
                if let Some(position) = open {
                    return Err(ParseError::UnbalancedBrace { position });
                }
                break;
            };
            match c {
                '}' => {
                    if open.is_none() {
                        return Err(ParseError::UnbalancedBrace { position: self.pos });
                    }
                    self.pos += 1;
                    break;
                }
                '^' | '_' => {
                    flush(&mut run, &mut items);
                    let node = self.scripts(Node::Group(Vec::new()))?;
                    items.push(node);
                }
                '{' => {
                    flush(&mut run, &mut items);
                    let start = self.pos;
                    self.pos += 1;
                    let group = Node::Group(self.items(Some(start))?);
                    items.push(self.scripts(group)?);
                }
                '\\' if self.peek_at(1) == Some('\\') => {
                    let kept = run.trim_end_matches(' ').len();
                    run.truncate(kept);
                    flush(&mut run, &mut items);
                    items.push(Node::LineBreak);
                    self.pos += 2;
                    while self.peek() == Some(' ') {
                        self.pos += 1;
                    }
                }
                '\\' => {
                    flush(&mut run, &mut items);
                    let symbol = self.command()?;
                    items.push(self.scripts(symbol)?);
                }
                c if is_run_char(c) => {
                    let next = self.peek_at(1);
                    if c != ' ' && matches!(next, Some('^' | '_')) {
                        flush(&mut run, &mut items);
                        self.pos += 1;
                        let base = Node::Run(c.to_string());
                        items.push(self.scripts(base)?);
                    } else {
                        run.push(c);
                        self.pos += 1;
                    }
                }
                ch => {
                    return Err(ParseError::UnexpectedChar {
                        ch,
                        position: self.pos,
                    })
                }
            }
        }
        flush(&mut run, &mut items);
        Ok(items)
    }

    /// Parses `\name` or `\c` at the cursor, including a required argument.
    fn command(&mut self) -> Result<Node, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let name = match self.peek() {
            None => return Err(ParseError::DanglingBackslash { position: start }),
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::from("\\");
                while let Some(c) = self.peek().filter(char::is_ascii_alphabetic) {
                    name.push(c);
                    self.pos += 1;
                }
                name
            }
            Some(c) => {
                self.pos += 1;
                format!("\\{c}")
            }
        };
        let Some(kind) = self.table.get(&name) else {
            return Err(ParseError::UnsupportedCommand {
                command: name,
                position: start,
            });
        };
        let is_word = name.len() > 2 || name[1..].starts_with(|c: char| c.is_ascii_alphabetic());
        if kind.takes_argument() {
            match self.argument()? {
                Some(arg) => Ok(Node::symbol_with(name, arg)),
                None => Err(ParseError::MissingArgument {
                    command: name,
                    position: start,
                }),
            }
        } else {
            if is_word && self.peek() == Some('{') && self.peek_at(1) == Some('}') {
                self.pos += 2;
            }
            Ok(Node::symbol(name))
        }
    }

    /// A braced group or a single token; `None` when neither follows.
    fn argument(&mut self) -> Result<Option<Node>, ParseError> {
        match self.peek() {
            Some('{') => {
                let start = self.pos;
                self.pos += 1;
                Ok(Some(Node::from_items(self.items(Some(start))?)))
            }
            Some('\\') if self.peek_at(1).is_some_and(|c| c != '\\') => {
                let node = self.command()?;
                Ok(Some(node))
            }
            Some(c) if c != ' ' && is_run_char(c) => {
                self.pos += 1;
                Ok(Some(Node::Run(c.to_string())))
            }
            _ => Ok(None),
        }
    }

    fn scripts(&mut self, base: Node) -> Result<Node, ParseError> {
        let mut superscript = None;
        let mut subscript = None;
        while let Some(op @ ('^' | '_')) = self.peek() {
            let position = self.pos;
            let slot = if op == '^' {
                &mut superscript
            } else {
                &mut subscript
            };
            if slot.is_some() {
                return Err(ParseError::DoubleScript { op, position });
            }
            self.pos += 1;
            let arg = self
                .argument()?
                .ok_or(ParseError::MissingScriptArgument { op, position })?;
            *slot = Some(arg);
        }
        if superscript.is_none() && subscript.is_none() {
            Ok(base)
        } else {
            Ok(Node::script(base, superscript, subscript))
        }
    }
}

fn flush(run: &mut String, items: &mut Vec<Node>) {
    if !run.is_empty() {
        items.push(Node::Run(std::mem::take(run)));
    }
}
