//! The command table: which `\commands` the grammar accepts and what they
//! render as. The table lives in `assets/commands.txt`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

const BUILTIN: &str = include_str!("../../assets/commands.txt");

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CommandKind {
    Symbol(char),
    /// Horizontal space in em.
    Space(f32),
    Accent(char),
    Alphabet(LetterStyle),
}

impl CommandKind {
    pub fn takes_argument(&self) -> bool {
        matches!(self, CommandKind::Accent(_) | CommandKind::Alphabet(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LetterStyle {
    DoubleStruck,
    Upright,
}

impl LetterStyle {
    pub fn map(self, c: char) -> char {
        match self {
            LetterStyle::Upright => c,
            LetterStyle::DoubleStruck => double_struck(c).unwrap_or(c),
        }
    }
}

/// Blackboard-bold form of an ASCII letter or digit.
pub fn double_struck(c: char) -> Option<char> {
    // Letters with a Letterlike Symbols code point are holes in the
    // Mathematical Alphanumeric block.
    let bmp = match c {
        'C' => Some('\u{2102}'),
        'H' => Some('\u{210D}'),
        'N' => Some('\u{2115}'),
        'P' => Some('\u{2119}'),
        'Q' => Some('\u{211A}'),
        'R' => Some('\u{211D}'),
        'Z' => Some('\u{2124}'),
        _ => None,
    };
    if bmp.is_some() {
        return bmp;
    }
    let offset = match c {
        'A'..='Z' => 0x1D538 + (c as u32 - 'A' as u32),
        'a'..='z' => 0x1D552 + (c as u32 - 'a' as u32),
        '0'..='9' => 0x1D7D8 + (c as u32 - '0' as u32),
        _ => return None,
    };
    char::from_u32(offset)
}

#[derive(Debug, Clone, Default)]
pub struct CommandTable {
    entries: BTreeMap<String, CommandKind>,
}

impl CommandTable {
    pub fn builtin() -> &'static CommandTable {
        static TABLE: OnceLock<CommandTable> = OnceLock::new();
        TABLE.get_or_init(|| CommandTable::parse(BUILTIN).expect("bundled command table is valid"))
    }

    /// Parses the text table format; errors carry the 1-based line number.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| format!("line {}: {msg}", lineno + 1);
            if fields.len() != 3 {
                return Err(err("expected three columns"));
            }
            // A lone backslash stands for the control space "\ ".
            let command = if fields[0] == "\\" {
                "\\ ".to_owned()
            } else {
                fields[0].to_owned()
            };
            if !command.starts_with('\\') {
                return Err(err("command must start with a backslash"));
            }
            let codepoint = |v: &str| {
                v.strip_prefix("U+")
                    .and_then(|hex| u32::from_str_radix(hex, 16).ok())
                    .and_then(char::from_u32)
                    .ok_or_else(|| err("bad code point"))
            };
            let kind = match fields[1] {
                "symbol" => CommandKind::Symbol(codepoint(fields[2])?),
                "accent" => CommandKind::Accent(codepoint(fields[2])?),
                "space" => CommandKind::Space(fields[2].parse().map_err(|_| err("bad width"))?),
                "alphabet" => CommandKind::Alphabet(match fields[2] {
                    "double-struck" => LetterStyle::DoubleStruck,
                    "upright" => LetterStyle::Upright,
                    _ => return Err(err("unknown letter style")),
                }),
                _ => return Err(err("unknown kind")),
            };
            if entries.insert(command, kind).is_some() {
                return Err(err("duplicate command"));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, command: &str) -> Option<CommandKind> {
        self.entries.get(command).copied()
    }

    pub fn contains(&self, command: &str) -> bool {
        self.entries.contains_key(command)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, CommandKind)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}
