//! Math-mode subset: parsing, canonical serialization, layout and
//! rasterization.
//!
//! Grammar of the supported subset:
//!
//! ```text
//! label    := item*
//! item     := run | symbol | scripted | group | linebreak | space
//! run      := (letter | digit | punct)+
//! symbol   := "\" command ( "{" item* "}" )?      argument only for arg-commands
//! scripted := atom ("^" arg)? ("_" arg)? | atom ("_" arg)? ("^" arg)?
//! atom     := run-char | symbol | group
//! arg      := "{" item* "}" | single-char
//! group    := "{" item* "}"
//! linebreak:= "\\"
//! space    := " " | "\;" | "\,"
//! ```
//!
//! The command table is `assets/commands.txt`.

mod ast;
pub mod commands;
pub mod fonts;
mod image;
mod layout;
mod parser;
mod serialize;

use thiserror::Error;

pub use self::ast::{MathAst, Node};
pub use self::commands::{CommandKind, CommandTable, LetterStyle};
pub use self::fonts::{FontHandle, FontSet, FontSpec};
pub use self::image::{image_dimensions, ImageIoError, RasterImage};
pub use self::layout::{
    BoxKind, Layout, LayoutBox, PlacedGlyph, Rect, RenderStyle, Renderer, DEFAULT_DPI,
    DEFAULT_SIZES_PT,
};
pub use self::parser::{is_reserved, is_run_char, parse_label, parse_with, ParseError};
pub use self::serialize::serialize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("no glyph for U+{:04X} ({ch:?}) in the selected font or any fallback", *ch as u32)]
    MissingGlyph { ch: char },
    #[error("ink extent {ink_width}x{ink_height} does not fit the {canvas_width}x{canvas_height} canvas")]
    Overflow {
        ink_width: u32,
        ink_height: u32,
        canvas_width: u32,
        canvas_height: u32,
    },
    #[error("unsupported command {0}")]
    UnsupportedCommand(String),
    #[error("invalid render style: {0}")]
    InvalidStyle(String),
    #[error("font: {0}")]
    Font(String),
}

/// Lays out `ast` with the bundled fonts and default sizes.
pub fn layout(ast: &MathAst, style: &RenderStyle) -> Result<Layout, RenderError> {
    Renderer::bundled().layout(ast, style)
}

/// Rasterizes `ast` with the bundled fonts and default sizes.
pub fn rasterize(ast: &MathAst, style: &RenderStyle) -> Result<RasterImage, RenderError> {
    Renderer::bundled().rasterize(ast, style)
}
