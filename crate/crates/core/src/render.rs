//! Software rasterizer for polycubes, glyph cubes, silhouettes and nets.
//!
//! Everything is a parallel projection onto the view's screen basis. Unit
//! cells are painted back to front by the depth of their centres, which is
//! exact for lattice cubes: two cells whose projections overlap are always
//! separated along an axis in the same order as their centre depths.

use crate::geometry::{merge_prisms, texture::GLYPH_SIZE, Cell, CubeNet, FaceId, FaceTexture, Polycube, TexturedCube};
use crate::view::ViewPreset;
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use thiserror::Error;

pub const IMAGE_SIZE: u32 = 512;
const MARGIN: f64 = 28.0;
const MAX_SHAPE_SCALE: f64 = 90.0;
const GLYPH_INSET: f64 = 0.1;
const ARROW_CLEARANCE: f64 = 1.0;
const ARROW_LENGTH: f64 = 2.0;
const ARROW_SHAFT_HALF: f64 = 0.1;
const ARROW_HEAD_HALF: f64 = 0.3;
const ARROW_HEAD_LEN: f64 = 0.7;
const ARROW_GAP: f64 = 0.25;
const SILHOUETTE_MAX_CELL: u32 = 64;
const CONTENT: u32 = 440;

pub type Rgb = [u8; 3];

pub mod colors {
    use super::Rgb;
    pub const BACKGROUND: Rgb = [255, 255, 255];
    pub const OUTLINE: Rgb = [0, 0, 0];
    pub const SHADE_Z: Rgb = [220, 220, 230];
    pub const SHADE_X: Rgb = [170, 170, 190];
    pub const SHADE_Y: Rgb = [120, 120, 145];
    pub const FACE_Z: Rgb = [245, 245, 245];
    pub const FACE_X: Rgb = [215, 215, 215];
    pub const FACE_Y: Rgb = [190, 190, 190];
    pub const INK: Rgb = [20, 20, 20];
    pub const ARROW: Rgb = [220, 30, 30];
    pub const HIGHLIGHT: Rgb = [40, 90, 220];
    pub const SILHOUETTE: Rgb = [90, 90, 90];
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("nothing to render")]
    EmptyScene,
    #[error("png encoding failed: {0}")]
    Encode(String),
    #[error("png decoding failed: {0}")]
    Decode(String),
    #[error("png must be 8-bit RGB, got {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Row-major 8-bit RGB image.
#[derive(Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Image({}x{})", self.width, self.height)
    }
}

impl Image {
    pub fn new(width: u32, height: u32, fill: Rgb) -> Self {
        let mut pixels = Vec::with_capacity((width * height * 3) as usize);
        for _ in 0..width * height {
            pixels.extend_from_slice(&fill);
        }
        Image { width, height, pixels }
    }

    pub fn blank() -> Self {
        Image::new(IMAGE_SIZE, IMAGE_SIZE, colors::BACKGROUND)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        let i = ((y * self.width + x) * 3) as usize;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, x: u32, y: u32, c: Rgb) {
        let i = ((y * self.width + x) * 3) as usize;
        self.pixels[i..i + 3].copy_from_slice(&c);
    }

    pub fn count(&self, c: Rgb) -> usize {
        self.pixels.chunks_exact(3).filter(|p| *p == c).count()
    }

    /// True when every pixel has the same colour.
    pub fn is_blank(&self) -> bool {
        self.pixels.chunks_exact(3).all(|p| p == &self.pixels[..3])
    }

    pub fn encode_png(&self) -> Result<Vec<u8>, RenderError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            enc.set_compression(png::Compression::Fast);
            let mut w = enc.write_header().map_err(|e| RenderError::Encode(e.to_string()))?;
            w.write_image_data(&self.pixels)
                .map_err(|e| RenderError::Encode(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Image, RenderError> {
        let dec = png::Decoder::new(std::io::Cursor::new(bytes));
        let mut reader = dec.read_info().map_err(|e| RenderError::Decode(e.to_string()))?;
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| RenderError::Decode("image too large".into()))?;
        let mut buf = vec![0; size];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| RenderError::Decode(e.to_string()))?;
        if info.color_type != png::ColorType::Rgb || info.bit_depth != png::BitDepth::Eight {
            return Err(RenderError::Format(format!("{:?}/{:?}", info.color_type, info.bit_depth)));
        }
        buf.truncate(info.buffer_size());
        Ok(Image {
            width: info.width,
            height: info.height,
            pixels: buf,
        })
    }

    pub fn save_png(&self, path: &Path) -> Result<(), RenderError> {
        std::fs::write(path, self.encode_png()?)?;
        Ok(())
    }
}

/// Occupancy of lattice columns along an axis direction. Row 0 is the top
/// of the picture.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Silhouette {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<bool>,
}

impl Silhouette {
    pub fn get(&self, col: usize, row: usize) -> bool {
        self.cells[row * self.width + col]
    }

    pub fn filled(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    /// Rows as strings of `#` and `.`.
    pub fn rows(&self) -> Vec<String> {
        self.cells
            .chunks(self.width)
            .map(|r| r.iter().map(|&b| if b { '#' } else { '.' }).collect())
            .collect()
    }
}

/// Silhouette of `p` seen from the `dir` side. The picture uses the frame of
/// that face: top has +x right and +y up, front has +x right and +z up, right
/// has +y right and +z up, back has −x right, left has −y right, bottom has
/// +x right and −y up.
pub fn project_ortho(p: &Polycube, dir: FaceId) -> Silhouette {
    let (u, v) = dir.frame();
    let coords: Vec<(i32, i32)> = p.cells().iter().map(|&c| (idot(c, u), idot(c, v))).collect();
    let a_min = coords.iter().map(|c| c.0).min().unwrap_or(0);
    let a_max = coords.iter().map(|c| c.0).max().unwrap_or(-1);
    let b_min = coords.iter().map(|c| c.1).min().unwrap_or(0);
    let b_max = coords.iter().map(|c| c.1).max().unwrap_or(-1);
    let width = (a_max - a_min + 1) as usize;
    let height = (b_max - b_min + 1) as usize;
    let mut cells = vec![false; width * height];
    for (a, b) in coords {
        cells[(b_max - b) as usize * width + (a - a_min) as usize] = true;
    }
    Silhouette { width, height, cells }
}

fn idot(a: Cell, b: Cell) -> i32 {
    a.x * b.x + a.y * b.y + a.z * b.z
}

fn vec3(c: Cell) -> [f64; 3] {
    [f64::from(c.x), f64::from(c.y), f64::from(c.z)]
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale3(a: [f64; 3], k: f64) -> [f64; 3] {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

struct Projector {
    right: [f64; 3],
    up: [f64; 3],
    dir: [f64; 3],
}

impl Projector {
    fn new(v: &ViewPreset) -> Self {
        let (right, up) = v.basis();
        Projector {
            right,
            up,
            dir: v.direction(),
        }
    }

    fn screen(&self, p: [f64; 3]) -> (f64, f64) {
        (dot3(p, self.right), dot3(p, self.up))
    }
}

/// Maps screen-plane coordinates to pixels so that given content is centred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Framing {
    scale: f64,
    cx: f64,
    cy: f64,
}

impl Framing {
    fn fit(points: &[(f64, f64)], max_scale: f64) -> Framing {
        let (mut s0, mut s1, mut t0, mut t1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(s, t) in points {
            s0 = s0.min(s);
            s1 = s1.max(s);
            t0 = t0.min(t);
            t1 = t1.max(t);
        }
        let avail = f64::from(IMAGE_SIZE) - 2.0 * MARGIN;
        let scale = (avail / (s1 - s0).max(1e-9))
            .min(avail / (t1 - t0).max(1e-9))
            .min(max_scale);
        Framing {
            scale,
            cx: (s0 + s1) / 2.0,
            cy: (t0 + t1) / 2.0,
        }
    }

    fn px(&self, (s, t): (f64, f64)) -> (f64, f64) {
        let half = f64::from(IMAGE_SIZE) / 2.0;
        (half + (s - self.cx) * self.scale, half - (t - self.cy) * self.scale)
    }
}

/// Fills the parallelogram `o + s·e1 + t·e2`, s, t ∈ [0, 1), colouring each
/// covered pixel centre with `shade(s, t)`.
fn fill_parallelogram(img: &mut Image, o: (f64, f64), e1: (f64, f64), e2: (f64, f64), shade: impl Fn(f64, f64) -> Rgb) {
    let det = e1.0 * e2.1 - e1.1 * e2.0;
    if det.abs() < 1e-9 {
        return;
    }
    let xs = [o.0, o.0 + e1.0, o.0 + e2.0, o.0 + e1.0 + e2.0];
    let ys = [o.1, o.1 + e1.1, o.1 + e2.1, o.1 + e1.1 + e2.1];
    let x0 = xs.iter().copied().fold(f64::MAX, f64::min).floor().max(0.0) as u32;
    let x1 = (xs.iter().copied().fold(f64::MIN, f64::max).ceil() as i64).clamp(0, i64::from(img.width)) as u32;
    let y0 = ys.iter().copied().fold(f64::MAX, f64::min).floor().max(0.0) as u32;
    let y1 = (ys.iter().copied().fold(f64::MIN, f64::max).ceil() as i64).clamp(0, i64::from(img.height)) as u32;
    for y in y0..y1 {
        for x in x0..x1 {
            let dx = f64::from(x) + 0.5 - o.0;
            let dy = f64::from(y) + 0.5 - o.1;
            let s = (dx * e2.1 - dy * e2.0) / det;
            let t = (e1.0 * dy - e1.1 * dx) / det;
            if (0.0..1.0).contains(&s) && (0.0..1.0).contains(&t) {
                img.set(x, y, shade(s, t));
            }
        }
    }
}

fn draw_line(img: &mut Image, a: (f64, f64), b: (f64, f64), c: Rgb) {
    let steps = (b.0 - a.0).abs().max((b.1 - a.1).abs()).ceil().max(1.0) as u32;
    for i in 0..=steps {
        let k = f64::from(i) / f64::from(steps);
        let x = (a.0 + (b.0 - a.0) * k).floor();
        let y = (a.1 + (b.1 - a.1) * k).floor();
        if x >= 0.0 && y >= 0.0 && x < f64::from(img.width) && y < f64::from(img.height) {
            img.set(x as u32, y as u32, c);
        }
    }
}

/// Fills a convex polygon given in pixel coordinates.
fn fill_convex(img: &mut Image, pts: &[(f64, f64)], c: Rgb) {
    let x0 = pts.iter().map(|p| p.0).fold(f64::MAX, f64::min).floor().max(0.0) as u32;
    let x1 = (pts.iter().map(|p| p.0).fold(f64::MIN, f64::max).ceil() as i64).clamp(0, i64::from(img.width)) as u32;
    let y0 = pts.iter().map(|p| p.1).fold(f64::MAX, f64::min).floor().max(0.0) as u32;
    let y1 = (pts.iter().map(|p| p.1).fold(f64::MIN, f64::max).ceil() as i64).clamp(0, i64::from(img.height)) as u32;
    for y in y0..y1 {
        for x in x0..x1 {
            let q = (f64::from(x) + 0.5, f64::from(y) + 0.5);
            let mut sign = 0.0;
            let inside = pts.iter().enumerate().all(|(i, &a)| {
                let b = pts[(i + 1) % pts.len()];
                let cr = (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0);
                if cr.abs() < 1e-12 {
                    return true;
                }
                if sign == 0.0 {
                    sign = cr.signum();
                }
                cr.signum() == sign
            });
            if inside {
                img.set(x, y, c);
            }
        }
    }
}

fn shape_shade(f: FaceId) -> Rgb {
    match f {
        FaceId::Top | FaceId::Bottom => colors::SHADE_Z,
        FaceId::Left | FaceId::Right => colors::SHADE_X,
        FaceId::Front | FaceId::Back => colors::SHADE_Y,
    }
}

fn glyph_base(f: FaceId) -> Rgb {
    match f {
        FaceId::Top | FaceId::Bottom => colors::FACE_Z,
        FaceId::Left | FaceId::Right => colors::FACE_X,
        FaceId::Front | FaceId::Back => colors::FACE_Y,
    }
}

/// Colour of a glyph face at face-frame coordinates `(s, t)` ∈ [0, 1)².
fn glyph_texel(raster: &[[bool; GLYPH_SIZE]; GLYPH_SIZE], base: Rgb, s: f64, t: f64) -> Rgb {
    let span = 1.0 - 2.0 * GLYPH_INSET;
    let gs = (s - GLYPH_INSET) / span;
    let gt = (t - GLYPH_INSET) / span;
    if !(0.0..1.0).contains(&gs) || !(0.0..1.0).contains(&gt) {
        return base;
    }
    let n = GLYPH_SIZE as f64;
    let col = (gs * n) as usize;
    let row = GLYPH_SIZE - 1 - (gt * n) as usize;
    if raster[row][col] {
        colors::INK
    } else {
        base
    }
}

fn cell_corners(c: Cell) -> impl Iterator<Item = [f64; 3]> {
    let o = vec3(c);
    (0..8).map(move |k| add(o, [f64::from(k & 1), f64::from((k >> 1) & 1), f64::from((k >> 2) & 1)]))
}

fn shape_points(shapes: &[Polycube], proj: &Projector) -> Vec<(f64, f64)> {
    shapes
        .iter()
        .flat_map(|p| p.cells().iter().copied())
        .flat_map(cell_corners)
        .map(|q| proj.screen(q))
        .collect()
}

/// Face quad of cell `c`: origin and the two edge vectors along the face frame.
fn face_quad(c: Cell, f: FaceId) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let (u, v) = f.frame();
    let (u, v, n) = (vec3(u), vec3(v), vec3(f.normal()));
    let centre = add(add(vec3(c), [0.5; 3]), scale3(n, 0.5));
    let o = add(add(centre, scale3(u, -0.5)), scale3(v, -0.5));
    (o, u, v)
}

fn draw_shapes(img: &mut Image, frame: &Framing, proj: &Projector, shapes: &[Polycube]) {
    let facing: Vec<FaceId> = FaceId::ALL
        .into_iter()
        .filter(|f| dot3(vec3(f.normal()), proj.dir) > 1e-9)
        .collect();
    let mut prism_of: Vec<HashMap<Cell, usize>> = Vec::with_capacity(shapes.len());
    let mut order: Vec<(f64, usize, Cell)> = Vec::new();
    for (si, p) in shapes.iter().enumerate() {
        let mut m = HashMap::new();
        for (bi, b) in merge_prisms(p).iter().enumerate() {
            for c in b.cells() {
                m.insert(c, bi);
            }
        }
        prism_of.push(m);
        for &c in p.cells() {
            order.push((dot3(add(vec3(c), [0.5; 3]), proj.dir), si, c));
        }
    }
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let px = |q: [f64; 3]| frame.px(proj.screen(q));
    for (_, si, c) in order {
        let p = &shapes[si];
        for &f in &facing {
            let n = f.normal();
            if p.contains(c + n) {
                continue;
            }
            let (o, e1, e2) = face_quad(c, f);
            let po = px(o);
            let p1 = px(add(o, e1));
            let p2 = px(add(o, e2));
            let p3 = px(add(add(o, e1), e2));
            let shade = shape_shade(f);
            fill_parallelogram(img, po, (p1.0 - po.0, p1.1 - po.1), (p2.0 - po.0, p2.1 - po.1), |_, _| shade);
            let (u, v) = f.frame();
            let edges = [(-v, po, p1), (u, p1, p3), (v, p2, p3), (-u, po, p2)];
            for (w, a, b) in edges {
                let nb = c + w;
                let merged = prism_of[si].get(&nb).is_some_and(|&i| i == prism_of[si][&c]) && !p.contains(nb + n);
                if !merged {
                    draw_line(img, a, b, colors::OUTLINE);
                }
            }
        }
    }
}

/// Polycube render from an isometric (or any parallel) view.
pub fn render_isometric(p: &Polycube, v: &ViewPreset) -> Result<Image, RenderError> {
    render_shapes(std::slice::from_ref(p), v)
}

/// Several disjoint polycubes in one picture.
pub fn render_shapes(shapes: &[Polycube], v: &ViewPreset) -> Result<Image, RenderError> {
    if shapes.iter().all(|p| p.is_empty()) {
        return Err(RenderError::EmptyScene);
    }
    let proj = Projector::new(v);
    let frame = Framing::fit(&shape_points(shapes, &proj), MAX_SHAPE_SCALE);
    let mut img = Image::blank();
    draw_shapes(&mut img, &frame, &proj, shapes);
    Ok(img)
}

/// A single glyph cube filling the picture. `highlight` paints one face solid
/// blue in place of its glyph.
pub fn render_cube(c: &TexturedCube, v: &ViewPreset, highlight: Option<FaceId>) -> Image {
    let proj = Projector::new(v);
    let pts: Vec<(f64, f64)> = cell_corners(Cell::new(0, 0, 0)).map(|q| proj.screen(q)).collect();
    let frame = Framing::fit(&pts, f64::INFINITY);
    let mut img = Image::blank();
    let cell = Cell::new(0, 0, 0);
    let px = |q: [f64; 3]| frame.px(proj.screen(q));
    for f in v.facing() {
        let (o, e1, e2) = face_quad(cell, f);
        let po = px(o);
        let p1 = px(add(o, e1));
        let p2 = px(add(o, e2));
        let p3 = px(add(add(o, e1), e2));
        let e1 = (p1.0 - po.0, p1.1 - po.1);
        let e2 = (p2.0 - po.0, p2.1 - po.1);
        if highlight == Some(f) {
            fill_parallelogram(&mut img, po, e1, e2, |_, _| colors::HIGHLIGHT);
        } else {
            let raster = c.face(f).raster();
            let base = glyph_base(f);
            fill_parallelogram(&mut img, po, e1, e2, |s, t| glyph_texel(&raster, base, s, t));
        }
        for (a, b) in [(po, p1), (p1, p3), (p3, p2), (p2, po)] {
            draw_line(&mut img, a, b, colors::OUTLINE);
        }
    }
    img
}

/// Only the glyph of face `f` exactly as it sits on the cube.
pub fn render_face(t: &FaceTexture) -> Image {
    let mut img = Image::blank();
    let side = f64::from(CONTENT);
    let o0 = (f64::from(IMAGE_SIZE) - side) / 2.0;
    let raster = t.raster();
    // screen y grows downward, so the tile origin is its bottom-left corner
    fill_parallelogram(&mut img, (o0, o0 + side), (side, 0.0), (0.0, -side), |s, tt| {
        glyph_texel(&raster, colors::FACE_Z, s, tt)
    });
    outline_rect(&mut img, o0, o0, side, side);
    img
}

fn outline_rect(img: &mut Image, x: f64, y: f64, w: f64, h: f64) {
    let (x1, y1) = (x + w - 1.0, y + h - 1.0);
    draw_line(img, (x, y), (x1, y), colors::OUTLINE);
    draw_line(img, (x1, y), (x1, y1), colors::OUTLINE);
    draw_line(img, (x1, y1), (x, y1), colors::OUTLINE);
    draw_line(img, (x, y1), (x, y), colors::OUTLINE);
}

/// Filled squares for occupied columns, each with a black border.
pub fn render_silhouette(s: &Silhouette) -> Result<Image, RenderError> {
    if s.filled() == 0 {
        return Err(RenderError::EmptyScene);
    }
    let cell = (CONTENT / s.width.max(s.height) as u32).min(SILHOUETTE_MAX_CELL);
    let x0 = (IMAGE_SIZE - cell * s.width as u32) / 2;
    let y0 = (IMAGE_SIZE - cell * s.height as u32) / 2;
    let mut img = Image::blank();
    for row in 0..s.height {
        for col in 0..s.width {
            if !s.get(col, row) {
                continue;
            }
            let (px, py) = (x0 + col as u32 * cell, y0 + row as u32 * cell);
            for y in py..py + cell {
                for x in px..px + cell {
                    img.set(x, y, colors::SILHOUETTE);
                }
            }
            outline_rect(&mut img, f64::from(px), f64::from(py), f64::from(cell), f64::from(cell));
        }
    }
    Ok(img)
}

/// Net tiles laid out on their grid positions, glyphs in the tile frame.
pub fn render_net(n: &CubeNet) -> Image {
    let cols = n.placements.iter().map(|p| p.pos.0).max().unwrap_or(0) + 1;
    let rows = n.placements.iter().map(|p| p.pos.1).max().unwrap_or(0) + 1;
    let tile = CONTENT / cols.max(rows) as u32;
    let x0 = (IMAGE_SIZE - tile * cols as u32) / 2;
    let y0 = (IMAGE_SIZE - tile * rows as u32) / 2;
    let mut img = Image::blank();
    let side = f64::from(tile);
    for p in &n.placements {
        let raster = p.face_texture().raster();
        let tx = f64::from(x0 + p.pos.0 as u32 * tile);
        let ty = f64::from(y0 + p.pos.1 as u32 * tile);
        fill_parallelogram(&mut img, (tx, ty + side), (side, 0.0), (0.0, -side), |s, t| {
            glyph_texel(&raster, colors::FACE_Z, s, t)
        });
    }
    for p in &n.placements {
        let tx = f64::from(x0 + p.pos.0 as u32 * tile);
        let ty = f64::from(y0 + p.pos.1 as u32 * tile);
        outline_rect(&mut img, tx, ty, side, side);
    }
    img
}

struct Arrow {
    tip: [f64; 3],
    tail: [f64; 3],
}

fn place_arrow(p: &Polycube, proj: &Projector, target: FaceId) -> Arrow {
    let (lo, hi) = p.bounds();
    let lo = vec3(lo);
    let hi = add(vec3(hi), [1.0; 3]);
    let centre = scale3(add(lo, hi), 0.5);
    let n = vec3(target.normal());
    let half = dot3(scale3([hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]], 0.5), n.map(f64::abs));
    let pts = shape_points(std::slice::from_ref(p), proj);
    let (s0, s1, t0, t1) = bbox(&pts);
    let mut offset = half + ARROW_CLEARANCE;
    for _ in 0..256 {
        let tip = add(centre, scale3(n, offset));
        let tail = add(tip, scale3(n, ARROW_LENGTH));
        let a = Arrow { tip, tail };
        let (a0, a1, b0, b1) = bbox(&arrow_outline(&a, proj));
        let g = ARROW_GAP;
        if a1 + g < s0 || a0 - g > s1 || b1 + g < t0 || b0 - g > t1 {
            return a;
        }
        offset += 0.25;
    }
    let tip = add(centre, scale3(n, offset));
    Arrow {
        tip,
        tail: add(tip, scale3(n, ARROW_LENGTH)),
    }
}

fn bbox(pts: &[(f64, f64)]) -> (f64, f64, f64, f64) {
    pts.iter().fold((f64::MAX, f64::MIN, f64::MAX, f64::MIN), |b, &(s, t)| {
        (b.0.min(s), b.1.max(s), b.2.min(t), b.3.max(t))
    })
}

type Polygon = Vec<(f64, f64)>;

/// Screen-plane polygons of the arrow: shaft quad, then head triangle.
fn arrow_polygons(a: &Arrow, proj: &Projector) -> (Polygon, Polygon) {
    let tip = proj.screen(a.tip);
    let tail = proj.screen(a.tail);
    let (dx, dy) = (tip.0 - tail.0, tip.1 - tail.1);
    let len = (dx * dx + dy * dy).sqrt().max(1e-9);
    let (ux, uy) = (dx / len, dy / len);
    let (nx, ny) = (-uy, ux);
    let head_len = ARROW_HEAD_LEN.min(len * 0.5);
    let neck = (tip.0 - ux * head_len, tip.1 - uy * head_len);
    let shaft = vec![
        (tail.0 + nx * ARROW_SHAFT_HALF, tail.1 + ny * ARROW_SHAFT_HALF),
        (neck.0 + nx * ARROW_SHAFT_HALF, neck.1 + ny * ARROW_SHAFT_HALF),
        (neck.0 - nx * ARROW_SHAFT_HALF, neck.1 - ny * ARROW_SHAFT_HALF),
        (tail.0 - nx * ARROW_SHAFT_HALF, tail.1 - ny * ARROW_SHAFT_HALF),
    ];
    let head = vec![
        tip,
        (neck.0 + nx * ARROW_HEAD_HALF, neck.1 + ny * ARROW_HEAD_HALF),
        (neck.0 - nx * ARROW_HEAD_HALF, neck.1 - ny * ARROW_HEAD_HALF),
    ];
    (shaft, head)
}

fn arrow_outline(a: &Arrow, proj: &Projector) -> Vec<(f64, f64)> {
    let (mut s, h) = arrow_polygons(a, proj);
    s.extend(h);
    s
}

/// Renders of the indicator scene sharing one framing: the bare shape, the
/// arrow alone, and both together.
pub struct IndicatorLayers {
    pub shape: Image,
    pub arrow: Image,
    pub combined: Image,
}

pub fn render_indicator_layers(p: &Polycube, v: &ViewPreset, target: FaceId) -> Result<IndicatorLayers, RenderError> {
    if p.is_empty() {
        return Err(RenderError::EmptyScene);
    }
    let proj = Projector::new(v);
    let arrow = place_arrow(p, &proj, target);
    let mut pts = shape_points(std::slice::from_ref(p), &proj);
    pts.extend(arrow_outline(&arrow, &proj));
    let frame = Framing::fit(&pts, MAX_SHAPE_SCALE);
    let mut shape = Image::blank();
    draw_shapes(&mut shape, &frame, &proj, std::slice::from_ref(p));
    let (shaft, head) = arrow_polygons(&arrow, &proj);
    let shaft: Vec<_> = shaft.into_iter().map(|q| frame.px(q)).collect();
    let head: Vec<_> = head.into_iter().map(|q| frame.px(q)).collect();
    let mut arrow_img = Image::blank();
    let mut combined = shape.clone();
    for img in [&mut arrow_img, &mut combined] {
        fill_convex(img, &shaft, colors::ARROW);
        fill_convex(img, &head, colors::ARROW);
    }
    Ok(IndicatorLayers {
        shape,
        arrow: arrow_img,
        combined,
    })
}

/// Shape render with an arrow outside its bounds pointing at it from the
/// `target` side.
pub fn render_view_indicator(p: &Polycube, v: &ViewPreset, target: FaceId) -> Result<Image, RenderError> {
    Ok(render_indicator_layers(p, v, target)?.combined)
}

/// Lays components out row-major on the ground plane, each in a slot as big
/// as the largest footprint, with `gap` empty cells between slots.
pub fn arrange_components_grid(components: &[Polycube], gap: i32) -> Vec<Polycube> {
    arrange_in_slots(components, gap, slot_size(components))
}

/// Largest x and y footprint among `components`.
pub fn slot_size(components: &[Polycube]) -> (i32, i32) {
    components.iter().fold((1, 1), |(x, y), p| {
        let s = p.size();
        (x.max(s[0]), y.max(s[1]))
    })
}

/// Row-major layout with a caller-chosen slot size, so sheets that differ
/// in one component keep every other component in place.
pub fn arrange_in_slots(components: &[Polycube], gap: i32, slot: (i32, i32)) -> Vec<Polycube> {
    let k = components.len();
    if k == 0 {
        return Vec::new();
    }
    let cols = (k as f64).sqrt().ceil() as usize;
    components
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (col, row) = ((i % cols) as i32, (i / cols) as i32);
            p.normalized()
                .translated(Cell::new(col * (slot.0 + gap), -row * (slot.1 + gap), 0))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{create_combination_shape, create_cube_with_textures, unfold_cube, NetLayout, Quarter};
    use crate::view::{face_normal_view, iso_presets, unoccluded_faces, visible_samples};

    fn shape(v: &[(i32, i32, i32)]) -> Polycube {
        Polycube::from_cells(v.iter().map(|&(x, y, z)| Cell::new(x, y, z))).unwrap()
    }

    fn brute_silhouette(p: &Polycube, dir: FaceId) -> Vec<String> {
        // Independent axis bookkeeping: screen axes per direction by hand.
        let key = |c: &Cell| -> (i32, i32) {
            match dir {
                FaceId::Top => (c.x, c.y),
                FaceId::Bottom => (c.x, -c.y),
                FaceId::Front => (c.x, c.z),
                FaceId::Back => (-c.x, c.z),
                FaceId::Right => (c.y, c.z),
                FaceId::Left => (-c.y, c.z),
            }
        };
        let cols: Vec<(i32, i32)> = p.cells().iter().map(key).collect();
        let (a0, a1) = (cols.iter().map(|c| c.0).min().unwrap(), cols.iter().map(|c| c.0).max().unwrap());
        let (b0, b1) = (cols.iter().map(|c| c.1).min().unwrap(), cols.iter().map(|c| c.1).max().unwrap());
        (b0..=b1)
            .rev()
            .map(|b| (a0..=a1).map(|a| if cols.contains(&(a, b)) { '#' } else { '.' }).collect())
            .collect()
    }

    #[test]
    fn png_round_trip_has_no_ancillary_chunks() {
        let img = render_isometric(&Polycube::single(), &iso_presets()[0]).unwrap();
        let bytes = img.encode_png().unwrap();
        assert_eq!(Image::decode_png(&bytes).unwrap(), img);
        let mut i = 8;
        let mut kinds = Vec::new();
        while i < bytes.len() {
            let len = u32::from_be_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
            kinds.push(String::from_utf8_lossy(&bytes[i + 4..i + 8]).to_string());
            i += 12 + len;
        }
        kinds.dedup();
        assert_eq!(kinds, vec!["IHDR", "IDAT", "IEND"]);
    }

    #[test]
    fn single_cube_shows_three_shades() {
        let img = render_isometric(&Polycube::single(), &iso_presets()[0]).unwrap();
        assert!(img.count(colors::SHADE_Z) > 1000);
        assert!(img.count(colors::SHADE_X) > 1000);
        assert!(img.count(colors::SHADE_Y) > 1000);
        assert_eq!(img, render_isometric(&Polycube::single(), &iso_presets()[0]).unwrap());
    }

    #[test]
    fn quad_centres_match_ray_cast_visibility() {
        // Each unoccluded face must own the pixel at its projected centre;
        // the colour there is the face's shade.
        let scenes = [
            shape(&[(0, 0, 0), (0, 0, 1)]),
            create_combination_shape(5, (8, 12)).unwrap(),
            create_combination_shape(9, (8, 12)).unwrap(),
        ];
        for p in &scenes {
            for v in iso_presets() {
                let img = render_isometric(p, &v).unwrap();
                let proj = Projector::new(&v);
                let frame = Framing::fit(&shape_points(std::slice::from_ref(p), &proj), MAX_SHAPE_SCALE);
                for (c, f) in unoccluded_faces(p, &v) {
                    let hits = visible_samples(p, &v, c, f)
                        .into_iter()
                        .filter(|&q| {
                            let (x, y) = frame.px(proj.screen(q));
                            img.get(x as u32, y as u32) == shape_shade(f)
                        })
                        .count();
                    assert!(hits > 0, "{c} {f:?} {v:?}");
                }
            }
        }
    }

    #[test]
    fn silhouettes_of_a_stack() {
        let p = shape(&[(0, 0, 0), (0, 0, 1)]);
        let top = project_ortho(&p, FaceId::Top);
        assert_eq!((top.width, top.height), (1, 1));
        let front = project_ortho(&p, FaceId::Front);
        assert_eq!((front.width, front.height), (1, 2));
        for d in FaceId::ALL {
            assert_eq!(project_ortho(&Polycube::single(), d).rows(), vec!["#"]);
        }
    }

    #[test]
    fn silhouette_matches_column_or() {
        for seed in 0..100 {
            let p = create_combination_shape(seed, (12, 12)).unwrap();
            for d in FaceId::ALL {
                let s = project_ortho(&p, d);
                assert_eq!(s.rows(), brute_silhouette(&p, d));
                assert!(s.filled() <= p.len());
            }
        }
    }

    #[test]
    fn silhouette_render_is_gapless() {
        let l = project_ortho(&shape(&[(0, 0, 0), (1, 0, 0), (0, 1, 0)]), FaceId::Top);
        assert_eq!(l.rows(), vec!["#.", "##"]);
        let img = render_silhouette(&l).unwrap();
        // between the two bottom squares there is border, never background
        let cell = SILHOUETTE_MAX_CELL;
        let y = (IMAGE_SIZE - 2 * cell) / 2 + cell + cell / 2;
        let x0 = (IMAGE_SIZE - 2 * cell) / 2;
        for x in x0..x0 + 2 * cell {
            assert_ne!(img.get(x, y), colors::BACKGROUND);
        }
        assert_eq!(img, render_silhouette(&l).unwrap());
        let one = render_silhouette(&project_ortho(&Polycube::single(), FaceId::Top)).unwrap();
        assert_eq!(one.get(IMAGE_SIZE / 2, IMAGE_SIZE / 2), colors::SILHOUETTE);
    }

    fn tile_origin(n: &CubeNet, pos: (i32, i32)) -> (u32, u32, u32) {
        let cols = n.placements.iter().map(|p| p.pos.0).max().unwrap() + 1;
        let rows = n.placements.iter().map(|p| p.pos.1).max().unwrap() + 1;
        let tile = CONTENT / cols.max(rows) as u32;
        let x0 = (IMAGE_SIZE - tile * cols as u32) / 2;
        let y0 = (IMAGE_SIZE - tile * rows as u32) / 2;
        (x0 + pos.0 as u32 * tile, y0 + pos.1 as u32 * tile, tile)
    }

    /// Samples the centre of each glyph cell inside a square region.
    fn sample_glyph(img: &Image, x: f64, y: f64, side: f64) -> [[bool; GLYPH_SIZE]; GLYPH_SIZE] {
        let mut out = [[false; GLYPH_SIZE]; GLYPH_SIZE];
        let cell = side * (1.0 - 2.0 * GLYPH_INSET) / GLYPH_SIZE as f64;
        for (r, row) in out.iter_mut().enumerate() {
            for (c, px) in row.iter_mut().enumerate() {
                let sx = x + side * GLYPH_INSET + (c as f64 + 0.5) * cell;
                let sy = y + side * GLYPH_INSET + (r as f64 + 0.5) * cell;
                *px = img.get(sx as u32, sy as u32) == colors::INK;
            }
        }
        out
    }

    #[test]
    fn net_tiles_show_their_glyphs() {
        let cube = create_cube_with_textures(4).unwrap();
        for layout in NetLayout::ALL {
            let net = unfold_cube(&cube, layout);
            let img = render_net(&net);
            for p in &net.placements {
                let (x, y, tile) = tile_origin(&net, p.pos);
                assert_eq!(sample_glyph(&img, f64::from(x), f64::from(y), f64::from(tile)), p.face_texture().raster());
            }
            let anchor = net.at((1, 1)).unwrap();
            assert_eq!(anchor.face, FaceId::Top);
        }
    }

    #[test]
    fn rotating_one_tile_changes_only_that_tile() {
        let cube = create_cube_with_textures(6).unwrap();
        let net = unfold_cube(&cube, NetLayout::Cross);
        let mut changed = net.clone();
        changed.placements[2].rotation = changed.placements[2].rotation.plus(1);
        let (a, b) = (render_net(&net), render_net(&changed));
        let (x, y, tile) = tile_origin(&net, changed.placements[2].pos);
        let mut diff = 0;
        for py in 0..IMAGE_SIZE {
            for px in 0..IMAGE_SIZE {
                if a.get(px, py) != b.get(px, py) {
                    diff += 1;
                    assert!(px >= x && px < x + tile && py >= y && py < y + tile);
                }
            }
        }
        assert!(diff > 0);
    }

    #[test]
    fn face_normal_view_shows_stored_rotation() {
        let cube = create_cube_with_textures(11).unwrap();
        for f in FaceId::ALL {
            let img = render_cube(&cube, &face_normal_view(f), None);
            let side = f64::from(IMAGE_SIZE) - 2.0 * MARGIN;
            assert_eq!(sample_glyph(&img, MARGIN, MARGIN, side), cube.face(f).raster(), "{f:?}");
        }
        let mut turned = cube;
        turned.set_face(FaceId::Top, FaceTexture::new(cube.face(FaceId::Top).texture, Quarter::new(cube.face(FaceId::Top).rotation.turns() + 1)));
        let a = render_cube(&cube, &face_normal_view(FaceId::Top), None);
        let b = render_cube(&turned, &face_normal_view(FaceId::Top), None);
        assert_ne!(a, b);
        let face = render_face(&cube.face(FaceId::Front));
        assert_eq!(sample_glyph(&face, f64::from(IMAGE_SIZE - CONTENT) / 2.0, f64::from(IMAGE_SIZE - CONTENT) / 2.0, f64::from(CONTENT)), cube.face(FaceId::Front).raster());
    }

    #[test]
    fn highlighted_face_is_blue() {
        let cube = create_cube_with_textures(2).unwrap();
        let v = iso_presets()[0];
        let img = render_cube(&cube, &v, Some(FaceId::Top));
        assert!(img.count(colors::HIGHLIGHT) > 5000);
        assert_eq!(render_cube(&cube, &v, None).count(colors::HIGHLIGHT), 0);
    }

    #[test]
    fn indicator_arrow_stays_off_the_shape() {
        for seed in 0..10 {
            let p = create_combination_shape(seed, (5, 12)).unwrap();
            for v in iso_presets() {
                for target in FaceId::ALL {
                    let layers = render_indicator_layers(&p, &v, target).unwrap();
                    let mut arrow_px = 0;
                    for (i, ((s, a), c)) in layers
                        .shape
                        .pixels()
                        .chunks_exact(3)
                        .zip(layers.arrow.pixels().chunks_exact(3))
                        .zip(layers.combined.pixels().chunks_exact(3))
                        .enumerate()
                    {
                        let in_arrow = a == colors::ARROW;
                        if in_arrow {
                            arrow_px += 1;
                            assert_eq!(s, colors::BACKGROUND, "arrow over shape at {i}");
                        } else {
                            assert_eq!(s, c);
                        }
                    }
                    assert!(arrow_px > 100);
                }
            }
        }
    }

    #[test]
    fn top_arrow_points_down() {
        let p = shape(&[(0, 0, 0), (1, 0, 0)]);
        let v = iso_presets()[0];
        let proj = Projector::new(&v);
        let a = place_arrow(&p, &proj, FaceId::Top);
        assert!(a.tail[2] > a.tip[2] && a.tip[2] >= 2.0);
        assert_eq!(a.tip[0], a.tail[0]);
    }

    #[test]
    fn grid_layout_separates_components() {
        let one = arrange_components_grid(&[shape(&[(3, 3, 3)])], 2);
        assert_eq!(one, vec![Polycube::single()]);
        let parts: Vec<Polycube> = (0..4).map(|s| create_combination_shape(s, (2, 5)).unwrap()).collect();
        let laid = arrange_components_grid(&parts, 2);
        for (i, a) in laid.iter().enumerate() {
            assert!(a.is_rotation_of(&parts[i]));
            for b in &laid[i + 1..] {
                let (alo, ahi) = a.bounds();
                let (blo, bhi) = b.bounds();
                let gap_x = (blo.x - ahi.x - 1).max(alo.x - bhi.x - 1);
                let gap_y = (blo.y - ahi.y - 1).max(alo.y - bhi.y - 1);
                assert!(gap_x >= 2 || gap_y >= 2);
                assert!(a.cells().is_disjoint(b.cells()));
            }
        }
        let img = render_shapes(&laid, &iso_presets()[0]).unwrap();
        assert!(!img.is_blank());
    }
}
