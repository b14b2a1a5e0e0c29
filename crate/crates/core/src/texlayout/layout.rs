//! Box layout and rasterization.
//!
//! Every node is laid out with its pen at the origin and its baseline at
//! y = 0 (y grows downward); parents translate children into place. The
//! finished block is moved so its ink starts exactly at the top-left margin.

use ab_glyph::{point, Font, GlyphId, PxScale, ScaleFont};
use serde::{Deserialize, Serialize};

use super::ast::{MathAst, Node};
use super::commands::{CommandKind, CommandTable, LetterStyle};
use super::fonts::{FontHandle, FontSet};
use super::image::RasterImage;
use super::RenderError;

/// Per-record rendering choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderStyle {
    pub font_id: usize,
    pub size_id: usize,
    /// Size of scripts relative to their base.
    pub script_scale: f32,
    /// Minimum baseline shift of scripts, in em of the base.
    pub script_shift: f32,
    pub canvas_width: u32,
    pub canvas_height: u32,
    pub margin: u32,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            font_id: 0,
            size_id: 0,
            script_scale: 0.7,
            script_shift: 0.35,
            canvas_width: 600,
            canvas_height: 160,
            margin: 4,
        }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<(), RenderError> {
        if !(self.script_scale > 0.0 && self.script_scale <= 1.0) {
            return Err(RenderError::InvalidStyle(
                "script_scale must be in (0, 1]".into(),
            ));
        }
        if self.canvas_width == 0 || self.canvas_height == 0 {
            return Err(RenderError::InvalidStyle(
                "canvas dimensions must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Axis-aligned rectangle in pixels, y down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f32,
    pub y0: f32,
    pub x1: f32,
    pub y1: f32,
}

impl Rect {
    pub fn width(&self) -> f32 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f32 {
        self.y1 - self.y0
    }

    fn union(self, other: Rect) -> Rect {
        Rect {
            x0: self.x0.min(other.x0),
            y0: self.y0.min(other.y0),
            x1: self.x1.max(other.x1),
            y1: self.y1.max(other.y1),
        }
    }

    fn translate(&mut self, dx: f32, dy: f32) {
        self.x0 += dx;
        self.x1 += dx;
        self.y0 += dy;
        self.y1 += dy;
    }
}

fn union(a: Option<Rect>, b: Option<Rect>) -> Option<Rect> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.union(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedGlyph {
    pub ch: char,
    pub font: FontHandle,
    pub glyph: GlyphId,
    pub scale: f32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoxKind {
    Block,
    Line,
    Run,
    Glyph(PlacedGlyph),
    Space,
    Symbol(String),
    Script,
    Superscript,
    Subscript,
    Group,
    Empty,
}

/// A positioned box. `x` is the left edge of the advance box, `width` the
/// advance, `baseline` the y of the baseline; `ink` covers drawn pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutBox {
    pub kind: BoxKind,
    pub x: f32,
    pub width: f32,
    pub baseline: f32,
    pub ink: Option<Rect>,
    pub children: Vec<LayoutBox>,
}

impl LayoutBox {
    fn container(kind: BoxKind, children: Vec<LayoutBox>) -> Self {
        let mut pen = 0.0;
        let mut placed = Vec::with_capacity(children.len());
        for mut child in children {
            child.translate(pen, 0.0);
            pen += child.width;
            placed.push(child);
        }
        let ink = placed.iter().fold(None, |acc, c| union(acc, c.ink));
        Self {
            kind,
            x: 0.0,
            width: pen,
            baseline: 0.0,
            ink,
            children: placed,
        }
    }

    pub fn translate(&mut self, dx: f32, dy: f32) {
        self.x += dx;
        self.baseline += dy;
        if let Some(ink) = &mut self.ink {
            ink.translate(dx, dy);
        }
        for c in &mut self.children {
            c.translate(dx, dy);
        }
    }

    /// Leaf glyph boxes in drawing order.
    pub fn glyphs(&self) -> Vec<&LayoutBox> {
        let mut out = Vec::new();
        self.collect_glyphs(&mut out);
        out
    }

    fn collect_glyphs<'a>(&'a self, out: &mut Vec<&'a LayoutBox>) {
        if let BoxKind::Glyph(_) = self.kind {
            out.push(self);
        }
        for c in &self.children {
            c.collect_glyphs(out);
        }
    }

    /// First descendant (pre-order, including self) of the given kind.
    pub fn find(&self, pred: &impl Fn(&BoxKind) -> bool) -> Option<&LayoutBox> {
        if pred(&self.kind) {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(pred))
    }
}

/// Result of laying out a label: the box tree, anchored at the margin.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub root: LayoutBox,
}

impl Layout {
    pub fn ink(&self) -> Option<Rect> {
        self.root.ink
    }
}

/// Fonts plus the size table; shareable across threads.
#[derive(Debug, Clone)]
pub struct Renderer {
    fonts: FontSet,
    sizes_pt: Vec<f32>,
    dpi: f32,
    line_spacing: f32,
}

pub const DEFAULT_SIZES_PT: [f32; 6] = [10.0, 12.0, 14.0, 16.0, 18.0, 20.0];
pub const DEFAULT_DPI: f32 = 100.0;

impl Renderer {
    pub fn new(fonts: FontSet, sizes_pt: Vec<f32>, dpi: f32) -> Result<Self, RenderError> {
        if sizes_pt.is_empty()
            || sizes_pt.iter().any(|s| !s.is_finite() || *s <= 0.0)
            || !dpi.is_finite()
            || dpi <= 0.0
        {
            return Err(RenderError::InvalidStyle(
                "sizes and dpi must be positive".into(),
            ));
        }
        Ok(Self {
            fonts,
            sizes_pt,
            dpi,
            line_spacing: 1.2,
        })
    }

    /// Bundled faces at 10-20 pt, 100 dpi.
    pub fn bundled() -> Self {
        Self::new(FontSet::bundled(), DEFAULT_SIZES_PT.to_vec(), DEFAULT_DPI)
            .expect("defaults are valid")
    }

    pub fn fonts(&self) -> &FontSet {
        &self.fonts
    }

    pub fn font_count(&self) -> usize {
        self.fonts.text_len()
    }

    pub fn size_count(&self) -> usize {
        self.sizes_pt.len()
    }

    /// Em size in pixels for a size id.
    pub fn em_px(&self, size_id: usize) -> f32 {
        self.sizes_pt[size_id] * self.dpi / 72.0
    }

    pub fn layout(&self, ast: &MathAst, style: &RenderStyle) -> Result<Layout, RenderError> {
        style.validate()?;
        if style.font_id >= self.font_count() || style.size_id >= self.size_count() {
            return Err(RenderError::InvalidStyle(format!(
                "font {} / size {} out of range ({} fonts, {} sizes)",
                style.font_id,
                style.size_id,
                self.font_count(),
                self.size_count()
            )));
        }
        let ctx = Ctx {
            renderer: self,
            table: CommandTable::builtin(),
            style,
        };
        let em = self.em_px(style.size_id);
        let items: &[Node] = match &ast.root {
            Node::Group(children) => children,
            other => std::slice::from_ref(other),
        };
        let font = self.fonts.font(FontHandle(style.font_id));
        let scaled = font.as_scaled(pt_scale(font, em));
        let advance = self.line_spacing * (scaled.ascent() - scaled.descent());

        let mut lines = Vec::new();
        for (i, line) in items.split(|n| matches!(n, Node::LineBreak)).enumerate() {
            let boxes = line
                .iter()
                .map(|n| ctx.node(n, em, None))
                .collect::<Result<Vec<_>, _>>()?;
            let mut line_box = LayoutBox::container(BoxKind::Line, boxes);
            line_box.translate(0.0, i as f32 * advance);
            lines.push(line_box);
        }
        let ink = lines.iter().fold(None, |acc, l| union(acc, l.ink));
        let width = lines.iter().map(|l| l.width).fold(0.0, f32::max);
        let mut root = LayoutBox {
            kind: BoxKind::Block,
            x: 0.0,
            width,
            baseline: 0.0,
            ink,
            children: lines,
        };
        let margin = style.margin as f32;
        match ink {
            Some(ink) => root.translate(margin - ink.x0, margin - ink.y0),
            None => root.translate(margin, margin + scaled.ascent()),
        }
        Ok(Layout { root })
    }

    /// Renders onto the style's canvas; errors if the ink does not fit.
    pub fn rasterize(
        &self,
        ast: &MathAst,
        style: &RenderStyle,
    ) -> Result<RasterImage, RenderError> {
        let layout = self.layout(ast, style)?;
        if let Some(ink) = layout.ink() {
            let margin = style.margin as f32;
            if ink.x1 + margin > style.canvas_width as f32
                || ink.y1 + margin > style.canvas_height as f32
            {
                return Err(RenderError::Overflow {
                    ink_width: ink.width().ceil() as u32,
                    ink_height: ink.height().ceil() as u32,
                    canvas_width: style.canvas_width,
                    canvas_height: style.canvas_height,
                });
            }
        }
        Ok(self.draw(&layout, style.canvas_width, style.canvas_height))
    }

    /// Renders onto a canvas just large enough for the ink plus margins.
    pub fn rasterize_fit(
        &self,
        ast: &MathAst,
        style: &RenderStyle,
    ) -> Result<RasterImage, RenderError> {
        let layout = self.layout(ast, style)?;
        let margin = style.margin as f32;
        let (w, h) = match layout.ink() {
            Some(ink) => (
                (ink.x1 + margin).ceil() as u32,
                (ink.y1 + margin).ceil() as u32,
            ),
            None => (2 * style.margin.max(1), 2 * style.margin.max(1)),
        };
        Ok(self.draw(&layout, w.max(1), h.max(1)))
    }

    fn draw(&self, layout: &Layout, width: u32, height: u32) -> RasterImage {
        let mut coverage = vec![0f32; width as usize * height as usize];
        for leaf in layout.root.glyphs() {
            let BoxKind::Glyph(g) = leaf.kind else {
                unreachable!()
            };
            let font = self.fonts.font(g.font);
            let glyph = g
                .glyph
                .with_scale_and_position(PxScale::from(g.scale), point(leaf.x, leaf.baseline));
            let Some(outlined) = font.outline_glyph(glyph) else {
                continue;
            };
            let bounds = outlined.px_bounds();
            let (ox, oy) = (bounds.min.x as i64, bounds.min.y as i64);
            outlined.draw(|gx, gy, c| {
                let x = ox + i64::from(gx);
                let y = oy + i64::from(gy);
                if x >= 0 && y >= 0 && x < i64::from(width) && y < i64::from(height) {
                    let cell = &mut coverage[y as usize * width as usize + x as usize];
                    *cell = cell.max(c);
                }
            });
        }
        let pixels = coverage
            .into_iter()
            .map(|c| 255 - (c.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect();
        RasterImage::from_pixels(width, height, pixels).expect("sized buffer")
    }
}

/// PxScale at which the font's em square is `em` pixels.
fn pt_scale(font: &impl Font, em: f32) -> PxScale {
    let upem = font.units_per_em().unwrap_or(1000.0);
    PxScale::from(em * font.height_unscaled() / upem)
}

struct Ctx<'a> {
    renderer: &'a Renderer,
    table: &'a CommandTable,
    style: &'a RenderStyle,
}

impl Ctx<'_> {
    fn glyph(&self, c: char, em: f32) -> Result<LayoutBox, RenderError> {
        let (handle, glyph) = self
            .renderer
            .fonts
            .resolve(self.style.font_id, c)
            .ok_or(RenderError::MissingGlyph { ch: c })?;
        let font = self.renderer.fonts.font(handle);
        let scale = pt_scale(font, em);
        let scaled = font.as_scaled(scale);
        // Outline bounds are in font units, y up; min/max order is not guaranteed.
        let ink = font.outline(glyph).map(|o| {
            let (h, v) = (scaled.h_scale_factor(), scaled.v_scale_factor());
            let (ya, yb) = (-o.bounds.min.y * v, -o.bounds.max.y * v);
            Rect {
                x0: o.bounds.min.x.min(o.bounds.max.x) * h,
                x1: o.bounds.min.x.max(o.bounds.max.x) * h,
                y0: ya.min(yb),
                y1: ya.max(yb),
            }
        });
        Ok(LayoutBox {
            kind: BoxKind::Glyph(PlacedGlyph {
                ch: c,
                font: handle,
                glyph,
                scale: scale.y,
            }),
            x: 0.0,
            width: scaled.h_advance(glyph),
            baseline: 0.0,
            ink,
            children: Vec::new(),
        })
    }

    fn space(&self, width: f32) -> LayoutBox {
        LayoutBox {
            kind: BoxKind::Space,
            x: 0.0,
            width,
            baseline: 0.0,
            ink: None,
            children: Vec::new(),
        }
    }

    fn space_width(&self, em: f32) -> f32 {
        let font = self.renderer.fonts.font(FontHandle(self.style.font_id));
        let scaled = font.as_scaled(pt_scale(font, em));
        scaled.h_advance(font.glyph_id(' '))
    }

    fn node(
        &self,
        node: &Node,
        em: f32,
        letters: Option<LetterStyle>,
    ) -> Result<LayoutBox, RenderError> {
        match node {
            Node::Run(text) => {
                let boxes = text
                    .chars()
                    .map(|c| match c {
                        ' ' => Ok(self.space(self.space_width(em))),
                        c => self.glyph(letters.map_or(c, |s| s.map(c)), em),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(LayoutBox::container(BoxKind::Run, boxes))
            }
            Node::Group(children) => {
                let boxes = children
                    .iter()
                    .map(|c| self.node(c, em, letters))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(LayoutBox::container(BoxKind::Group, boxes))
            }
            Node::LineBreak => Ok(LayoutBox::container(BoxKind::Empty, Vec::new())),
            Node::Symbol { command, argument } => {
                self.symbol(command, argument.as_deref(), em, letters)
            }
            Node::Script {
                base,
                superscript,
                subscript,
            } => self.script(
                base,
                superscript.as_deref(),
                subscript.as_deref(),
                em,
                letters,
            ),
        }
    }

    fn symbol(
        &self,
        command: &str,
        argument: Option<&Node>,
        em: f32,
        letters: Option<LetterStyle>,
    ) -> Result<LayoutBox, RenderError> {
        let kind = self
            .table
            .get(command)
            .ok_or_else(|| RenderError::UnsupportedCommand(command.to_owned()))?;
        let inner = match (kind, argument) {
            (CommandKind::Symbol(c), _) => self.glyph(c, em)?,
            (CommandKind::Space(w), _) => self.space(w * em),
            (CommandKind::Alphabet(style), Some(arg)) => self.node(arg, em, Some(style))?,
            (CommandKind::Accent(a), Some(arg)) => {
                let body = self.node(arg, em, letters)?;
                let mut accent = self.glyph(a, em)?;
                if let Some(accent_ink) = accent.ink {
                    let target = body.ink.unwrap_or(Rect {
                        x0: 0.0,
                        x1: body.width,
                        y0: -0.7 * em,
                        y1: 0.0,
                    });
                    let dx = (target.x0 + target.x1) / 2.0 - (accent_ink.x0 + accent_ink.x1) / 2.0;
                    let dy = (target.y0 - 0.08 * em) - accent_ink.y1;
                    accent.translate(dx, dy);
                }
                let ink = union(body.ink, accent.ink);
                // The accent never advances the pen.
                let width = body.width;
                LayoutBox {
                    kind: BoxKind::Group,
                    x: 0.0,
                    width,
                    baseline: 0.0,
                    ink,
                    children: vec![body, accent],
                }
            }
            (_, None) => {
                return Err(RenderError::UnsupportedCommand(format!(
                    "{command} without argument"
                )))
            }
        };
        Ok(LayoutBox::container(
            BoxKind::Symbol(command.to_owned()),
            vec![inner],
        ))
    }

    fn script(
        &self,
        base: &Node,
        superscript: Option<&Node>,
        subscript: Option<&Node>,
        em: f32,
        letters: Option<LetterStyle>,
    ) -> Result<LayoutBox, RenderError> {
        let base_box = self.node(base, em, letters)?;
        let small = em * self.style.script_scale;
        let min_shift = self.style.script_shift * em;
        let mut children = vec![base_box];
        let x = children[0].width;
        let mut extra: f32 = 0.0;
        if let Some(sup) = superscript {
            let inner = self.node(sup, small, letters)?;
            let mut b = LayoutBox::container(BoxKind::Superscript, vec![inner]);
            // Raise until the script's ink bottom clears the base baseline.
            let shift = b.ink.map_or(min_shift, |ink| min_shift.max(ink.y1 + 1.0));
            b.translate(x, -shift);
            extra = extra.max(b.width);
            children.push(b);
        }
        if let Some(sub) = subscript {
            let inner = self.node(sub, small, letters)?;
            let mut b = LayoutBox::container(BoxKind::Subscript, vec![inner]);
            // Lower until the script's ink top sits below the base baseline.
            let shift = b.ink.map_or(min_shift, |ink| min_shift.max(1.0 - ink.y0));
            b.translate(x, shift);
            extra = extra.max(b.width);
            children.push(b);
        }
        let ink = children.iter().fold(None, |acc, c| union(acc, c.ink));
        Ok(LayoutBox {
            kind: BoxKind::Script,
            x: 0.0,
            width: x + extra,
            baseline: 0.0,
            ink,
            children,
        })
    }
}
