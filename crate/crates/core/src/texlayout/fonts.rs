//! Font resources. Eight text faces and one math fallback are bundled; any
//! TrueType/OpenType files can be configured instead.

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use ab_glyph::{Font, FontArc, GlyphId};
use serde::{Deserialize, Serialize};

use super::RenderError;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_bytes!(concat!("../../assets/fonts/", $name, ".ttf")) as &[u8])),*]
    };
}

/// Text faces, in font-id order.
const BUNDLED_TEXT: &[(&str, &[u8])] = bundled!(
    "DejaVuSerif",
    "DejaVuSerif-Italic",
    "DejaVuSerif-Bold",
    "DejaVuSansMono",
    "DejaVuSansMono-Oblique",
    "STIXGeneral",
    "STIXGeneralItalic",
    "STIXGeneralBol",
);

const BUNDLED_FALLBACK: &[(&str, &[u8])] = bundled!("DejaVuSans");

/// Where a font comes from: a bundled face by name, or a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FontSpec {
    Bundled(String),
    File { path: PathBuf },
}

impl FontSpec {
    pub fn bundled_text() -> Vec<FontSpec> {
        BUNDLED_TEXT
            .iter()
            .map(|(n, _)| FontSpec::Bundled((*n).to_owned()))
            .collect()
    }

    pub fn bundled_fallback() -> Vec<FontSpec> {
        BUNDLED_FALLBACK
            .iter()
            .map(|(n, _)| FontSpec::Bundled((*n).to_owned()))
            .collect()
    }

    fn load(&self) -> Result<(String, FontArc), RenderError> {
        match self {
            FontSpec::Bundled(name) => BUNDLED_TEXT
                .iter()
                .chain(BUNDLED_FALLBACK)
                .find(|(n, _)| n == name)
                .map(|(n, bytes)| {
                    let font = FontArc::try_from_slice(bytes).expect("bundled fonts parse");
                    ((*n).to_owned(), font)
                })
                .ok_or_else(|| RenderError::Font(format!("no bundled font named {name}"))),
            FontSpec::File { path } => {
                let bytes = std::fs::read(path)
                    .map_err(|e| RenderError::Font(format!("{}: {e}", path.display())))?;
                let font = FontArc::try_from_vec(bytes)
                    .map_err(|e| RenderError::Font(format!("{}: {e}", path.display())))?;
                Ok((path.display().to_string(), font))
            }
        }
    }
}

/// Index into a [`FontSet`]'s combined list (text faces, then fallbacks).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FontHandle(pub(crate) usize);

/// Immutable, shareable collection of loaded fonts.
#[derive(Clone)]
pub struct FontSet {
    inner: Arc<FontSetInner>,
}

struct FontSetInner {
    names: Vec<String>,
    fonts: Vec<FontArc>,
    text_count: usize,
}

impl FontSet {
    pub fn bundled() -> FontSet {
        static SET: OnceLock<FontSet> = OnceLock::new();
        SET.get_or_init(|| {
            FontSet::load(&FontSpec::bundled_text(), &FontSpec::bundled_fallback())
                .expect("bundled fonts load")
        })
        .clone()
    }

    pub fn load(text: &[FontSpec], fallback: &[FontSpec]) -> Result<FontSet, RenderError> {
        if text.is_empty() {
            return Err(RenderError::Font(
                "at least one text font is required".into(),
            ));
        }
        let mut names = Vec::new();
        let mut fonts = Vec::new();
        for spec in text.iter().chain(fallback) {
            let (name, font) = spec.load()?;
            names.push(name);
            fonts.push(font);
        }
        Ok(FontSet {
            inner: Arc::new(FontSetInner {
                names,
                fonts,
                text_count: text.len(),
            }),
        })
    }

    /// Number of selectable text faces.
    pub fn text_len(&self) -> usize {
        self.inner.text_count
    }

    pub fn name(&self, handle: FontHandle) -> &str {
        &self.inner.names[handle.0]
    }

    pub fn text_names(&self) -> &[String] {
        &self.inner.names[..self.inner.text_count]
    }

    pub fn font(&self, handle: FontHandle) -> &FontArc {
        &self.inner.fonts[handle.0]
    }

    /// The face that draws `c` for text font `font_id`: the face itself if
    /// it has the glyph, else the first fallback that does.
    pub fn resolve(&self, font_id: usize, c: char) -> Option<(FontHandle, GlyphId)> {
        let candidates =
            std::iter::once(font_id).chain(self.inner.text_count..self.inner.fonts.len());
        for idx in candidates {
            let id = self.inner.fonts[idx].glyph_id(c);
            if id.0 != 0 {
                return Some((FontHandle(idx), id));
            }
        }
        None
    }

    /// Whether `c` can be drawn whichever text face is selected.
    pub fn supports(&self, c: char) -> bool {
        c == ' ' || (0..self.inner.text_count).all(|id| self.resolve(id, c).is_some())
    }
}

impl std::fmt::Debug for FontSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FontSet")
            .field("names", &self.inner.names)
            .field("text_count", &self.inner.text_count)
            .finish()
    }
}
