//! Text formats: patterns, sparse coefficients and benchmark rows.
//!
//! Pattern files are line oriented, `#` starts a comment:
//!
//! ```text
//! tile <Tx> <Ty> <J>
//! poly <weight> <x0> <y0> <x1> <y1> <x2> <y2> ...
//! ```
//!
//! Coefficient files start with `dc,<value>` followed by one
//! `<subband>,<j>,<kx>,<ky>,<value>` line per nonzero detail, sorted by level,
//! subband (`hl`, `lh`, `hh`), `kx`, `ky`. Values use 17 significant digits.

use std::fmt::Write as _;
use std::io::{self, Write};

use thiserror::Error;

use crate::geometry::{GeometryError, IPoint, Point, Polygon};
use crate::pattern::{check_item, Item, Pattern, Tile, TileError};
use crate::transform::CoefficientSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("SyntaxError({line}): {message}")]
    Syntax { line: usize, message: String },
    #[error("BadTile({line}): {source}")]
    BadTile { line: usize, source: TileError },
    #[error("BadPolygon({line}): {reason}")]
    BadPolygon { line: usize, reason: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::BadTile { line, .. }
            | ParseError::BadPolygon { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

enum Coord {
    Int(i64),
    Real(f64),
}

fn parse_coord(tok: &str, line: usize) -> Result<Coord, ParseError> {
    if let Ok(v) = tok.parse::<i64>() {
        return Ok(Coord::Int(v));
    }
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Coord::Real(v)),
        _ => Err(syntax(line, format!("bad coordinate '{tok}'"))),
    }
}

/// Parses a pattern file. Each polygon is checked for simplicity and tile
/// containment; pairwise disjointness is left to [`Pattern::validate`].
pub fn parse_pattern(text: &str) -> Result<Pattern, ParseError> {
    let mut tile: Option<Tile> = None;
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap_or_default();
        let rest: Vec<&str> = toks.collect();
        match (keyword, tile) {
            ("tile", None) => {
                let [tx, ty, depth] = rest.as_slice() else {
                    return Err(syntax(line, "expected 'tile <Tx> <Ty> <J>'"));
                };
                let num = |t: &str| t.parse::<u64>().map_err(|_| syntax(line, format!("bad tile field '{t}'")));
                let depth = depth.parse::<u32>().map_err(|_| syntax(line, format!("bad depth '{depth}'")))?;
                tile = Some(
                    Tile::new(num(tx)?, num(ty)?, depth)
                        .map_err(|source| ParseError::BadTile { line, source })?,
                );
            }
            ("tile", Some(_)) => return Err(syntax(line, "duplicate tile line")),
            (_, None) => return Err(syntax(line, "first record must be 'tile <Tx> <Ty> <J>'")),
            ("poly", Some(tile)) => {
                let item = parse_poly(&rest, line)?;
                check_item(&tile, items.len(), &item)
                    .map_err(|v| ParseError::BadPolygon { line, reason: v.to_string() })?;
                items.push(item);
            }
            (other, Some(_)) => return Err(syntax(line, format!("unknown record '{other}'"))),
        }
    }
    match tile {
        Some(tile) => Ok(Pattern::new(tile, items)),
        None => Err(syntax(1, "missing tile line")),
    }
}

fn parse_poly(fields: &[&str], line: usize) -> Result<Item, ParseError> {
    let Some((weight, coords)) = fields.split_first() else {
        return Err(syntax(line, "expected 'poly <weight> <x0> <y0> ...'"));
    };
    let weight: f64 = weight
        .parse()
        .map_err(|_| syntax(line, format!("bad weight '{weight}'")))?;
    if coords.len() < 6 || coords.len() % 2 != 0 {
        return Err(syntax(
            line,
            format!("expected an even number (at least 6) of coordinates, got {}", coords.len()),
        ));
    }
    let parsed = coords
        .iter()
        .map(|t| parse_coord(t, line))
        .collect::<Result<Vec<_>, _>>()?;
    let bad = |e: GeometryError| ParseError::BadPolygon { line, reason: e.to_string() };
    let polygon = if parsed.iter().all(|c| matches!(c, Coord::Int(_))) {
        let ints: Vec<IPoint> = parsed
            .chunks_exact(2)
            .map(|xy| match xy {
                [Coord::Int(x), Coord::Int(y)] => IPoint::new(*x, *y),
                _ => unreachable!("all coordinates are integers"),
            })
            .collect();
        Polygon::from_ipoints(ints).map_err(bad)?
    } else {
        let as_f64 = |c: &Coord| match *c {
            Coord::Int(v) => v as f64,
            Coord::Real(v) => v,
        };
        let pts = parsed
            .chunks_exact(2)
            .map(|xy| Point::new(as_f64(&xy[0]), as_f64(&xy[1])))
            .collect();
        Polygon::new(pts).map_err(bad)?
    };
    Ok(Item::new(polygon, weight))
}

/// Canonical text of a pattern: clockwise rings starting at the smallest
/// vertex, integers without a decimal point, every line newline-terminated.
pub fn serialize_pattern(pattern: &Pattern) -> String {
    let tile = pattern.tile();
    let mut out = format!("tile {} {} {}\n", tile.width(), tile.height(), tile.depth());
    for item in pattern.items() {
        let _ = write!(out, "poly {}", item.weight);
        match item.polygon.int_ring() {
            Some(ring) => ring.iter().for_each(|p| {
                let _ = write!(out, " {} {}", p.x, p.y);
            }),
            None => item.polygon.points().iter().for_each(|p| {
                let _ = write!(out, " {} {}", p.x, p.y);
            }),
        }
        out.push('\n');
    }
    out
}

/// Formats like C's `%.17g`: shortest of fixed or exponent notation with 17
/// significant digits and trailing zeros removed. Enough digits to recover
/// any `f64` exactly.
pub fn format_g17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_fraction(&format!("{:.*}", (16 - exp) as usize, v)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct Counting<'a, W> {
    inner: &'a mut W,
    bytes: usize,
}

impl<W: Write> Counting<'_, W> {
    fn line(&mut self, s: &str) -> io::Result<()> {
        self.inner.write_all(s.as_bytes())?;
        self.inner.write_all(b"\n")?;
        self.bytes += s.len() + 1;
        Ok(())
    }
}

/// Writes a coefficient file and returns the number of bytes written.
pub fn write_coefficients<W: Write>(cs: &CoefficientSet, sink: &mut W) -> io::Result<usize> {
    let mut out = Counting { inner: sink, bytes: 0 };
    out.line(&format!("dc,{}", format_g17(cs.dc())))?;
    for (idx, value) in cs.sorted() {
        out.line(&format!(
            "{},{},{},{},{}",
            idx.subband,
            idx.level,
            idx.kx,
            idx.ky,
            format_g17(value)
        ))?;
    }
    Ok(out.bytes)
}

/// Coefficient file as a string.
pub fn coefficients_to_string(cs: &CoefficientSet) -> String {
    let mut buf = Vec::new();
    write_coefficients(cs, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("coefficient text is ASCII")
}

/// One benchmarked pattern: sizes and median runtimes of both transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRecord {
    pub tile_size: u64,
    pub pattern_id: String,
    /// Total vertex count.
    pub vertices: usize,
    /// Polygon count.
    pub polygons: usize,
    pub pcht_ns: u64,
    pub dht_ns: u64,
    pub nodes_visited: u64,
}

impl BenchRecord {
    /// `dht_ns / pcht_ns`.
    pub fn speedup(&self) -> f64 {
        self.dht_ns as f64 / self.pcht_ns as f64
    }
}

pub const BENCH_HEADER: &str = "tile_size,pattern_id,K,M,pcht_ns,dht_ns,speedup,nodes_visited";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes benchmark rows as CSV and returns the number of bytes written.
pub fn write_bench_rows<W: Write>(rows: &[BenchRecord], sink: &mut W) -> io::Result<usize> {
    let mut out = Counting { inner: sink, bytes: 0 };
    out.line(BENCH_HEADER)?;
    for r in rows {
        out.line(&format!(
            "{},{},{},{},{},{},{},{}",
            r.tile_size,
            csv_field(&r.pattern_id),
            r.vertices,
            r.polygons,
            r.pcht_ns,
            r.dht_ns,
            format_g17(r.speedup()),
            r.nodes_visited
        ))?;
    }
    Ok(out.bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{pcht_pattern, CoeffIndex, Subband};

    const UNIT: &str = "tile 2 2 1\npoly 1 0 0 0 1 1 1 1 0";

    #[test]
    fn parse_examples() {
        let p = parse_pattern(UNIT).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.items()[0].polygon, Polygon::rectangle(0, 0, 1, 1).unwrap());
        assert!(matches!(
            parse_pattern("tile 3 2 1"),
            Err(ParseError::BadTile { line: 1, .. })
        ));
        assert!(matches!(
            parse_pattern("poly 1 0 0 1 1"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let cases = [
            ("tile 4 4 2\npoly 1 0 0 1 1", 2),
            ("tile 4 4 2\npoly 1 0 0 0 1 1", 2),
            ("tile 4 4 2\n\n# c\nrect 1 2", 4),
            ("tile 4 4 2\ntile 4 4 2", 2),
            ("tile 4 4\n", 1),
            ("tile 4 4 2\npoly x 0 0 0 1 1 1", 2),
            ("tile 4 4 2\npoly 1 0 0 0 1 1 z", 2),
            ("", 1),
        ];
        for (text, line) in cases {
            let err = parse_pattern(text).unwrap_err();
            assert!(matches!(err, ParseError::Syntax { .. }), "{text:?}: {err}");
            assert_eq!(err.line(), line, "{text:?}");
        }
    }

    #[test]
    fn parse_rejects_bad_polygons() {
        let outside = parse_pattern("tile 4 4 2\npoly 1 3.5 0 3.5 1 4.5 1 4.5 0").unwrap_err();
        assert_eq!(outside, ParseError::BadPolygon { line: 2, reason: "OutOfTile(0)".into() });
        let bowtie = parse_pattern("tile 8 8 3\npoly 1 0 0 4 2 4 0 0 3").unwrap_err();
        assert!(matches!(bowtie, ParseError::BadPolygon { line: 2, .. }));
        let flat = parse_pattern("tile 8 8 3\npoly 1 0 0 1 1 2 2").unwrap_err();
        assert!(matches!(flat, ParseError::BadPolygon { line: 2, .. }));
    }

    #[test]
    fn comments_and_real_coordinates() {
        let p = parse_pattern("# header\ntile 8 8 3 # depth 3\npoly -0.5 0.5 0 0 3 3 0\n").unwrap();
        assert_eq!(p.items()[0].weight, -0.5);
        assert_eq!(p.items()[0].polygon.kind(), crate::geometry::PolygonKind::GeneralReal);
        assert_eq!(serialize_pattern(&p), "tile 8 8 3\npoly -0.5 0 3 3 0 0.5 0\n");
    }

    #[test]
    fn serialize_examples() {
        let p = parse_pattern(UNIT).unwrap();
        assert_eq!(serialize_pattern(&p), format!("{UNIT}\n"));
        let empty = Pattern::empty(Tile::new(4, 4, 2).unwrap());
        assert_eq!(serialize_pattern(&empty), "tile 4 4 2\n");
        // Counter-clockwise input comes back clockwise from the smallest vertex.
        let ccw = parse_pattern("tile 4 4 2\npoly 2 1 1 2 1 2 2 1 2").unwrap();
        assert_eq!(serialize_pattern(&ccw), "tile 4 4 2\npoly 2 1 1 1 2 2 2 2 1\n");
    }

    #[test]
    fn g17_formatting() {
        assert_eq!(format_g17(0.5), "0.5");
        assert_eq!(format_g17(0.0), "0");
        assert_eq!(format_g17(-0.0), "0");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(-2.5e-7), "-2.4999999999999999e-07");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(1.0 / 3.0), "0.33333333333333331");
        for v in [0.1, 1.0 / 3.0, -7.25e-12, 6.02e23, f64::MIN_POSITIVE, 12345.678] {
            assert_eq!(format_g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn coefficient_files() {
        let zero = CoefficientSet::new(Tile::new(4, 4, 2).unwrap());
        assert_eq!(coefficients_to_string(&zero), "dc,0\n");

        let (cs, _) = pcht_pattern(&parse_pattern(UNIT).unwrap());
        let mut buf = Vec::new();
        let n = write_coefficients(&cs, &mut buf).unwrap();
        assert_eq!(n, buf.len());
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "dc,0.5\nhl,0,0,0,0.5\nlh,0,0,0,0.5\nhh,0,0,0,0.5\n"
        );

        let mut deep = CoefficientSet::new(Tile::new(4, 4, 2).unwrap());
        deep.insert(CoeffIndex::new(Subband::Hl, 1, 1, 0), 1.0);
        deep.insert(CoeffIndex::new(Subband::Hh, 0, 0, 0), 2.0);
        deep.insert(CoeffIndex::new(Subband::Hl, 1, 0, 1), 3.0);
        assert_eq!(
            coefficients_to_string(&deep),
            "dc,0\nhh,0,0,0,2\nhl,1,0,1,3\nhl,1,1,0,1\n"
        );
    }

    #[test]
    fn bench_rows() {
        let mut buf = Vec::new();
        write_bench_rows(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{BENCH_HEADER}\n"));

        let row = BenchRecord {
            tile_size: 64,
            pattern_id: "contact-array-64-4-0".into(),
            vertices: 16,
            polygons: 4,
            pcht_ns: 1200,
            dht_ns: 1200,
            nodes_visited: 77,
        };
        let mut buf = Vec::new();
        let n = write_bench_rows(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(n, text.len());
        assert_eq!(text.lines().nth(1), Some("64,contact-array-64-4-0,16,4,1200,1200,1,77"));
    }
}
