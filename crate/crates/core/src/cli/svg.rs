use std::fmt::Write as _;

use crate::bn::Pbn;
use crate::error::{Error, Result};
use crate::pla::{RegionLabel, RegionPartition};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn fill(l: RegionLabel) -> &'static str {
    match l {
        RegionLabel::Accepting => "#4caf50",
        RegionLabel::Rejecting => "#e53935",
        RegionLabel::Unknown => "#ffffff",
    }
}

/// Plots a partition over at most two parameters. With one parameter the
/// regions become vertical bands.
pub fn render_svg(b: &Pbn, p: &RegionPartition) -> Result<String> {
    let dims = p.domain.dim();
    if dims > 2 {
        return Err(Error::InvalidRegion("SVG limited to 2 parameters".into()));
    }
    let dom = p.domain.to_f64();
    let names = b.params().names();
    let scale = |x: f64, (lo, hi): (f64, f64)| if hi > lo { (x - lo) / (hi - lo) * SIZE } else { 0.0 };
    let total = SIZE + 2.0 * MARGIN;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{total}" height="{total}" fill="white"/>"#).unwrap();
    for (r, l) in &p.regions {
        let iv = r.to_f64();
        let (x0, x1, y0, y1) = match dims {
            0 => (0.0, SIZE, 0.0, SIZE),
            1 => (scale(iv[0].0, dom[0]), scale(iv[0].1, dom[0]), 0.0, SIZE),
            _ => (
                scale(iv[0].0, dom[0]),
                scale(iv[0].1, dom[0]),
                scale(iv[1].0, dom[1]),
                scale(iv[1].1, dom[1]),
            ),
        };
        writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}" stroke="black" stroke-width="0.2"/>"#,
            MARGIN + x0,
            MARGIN + SIZE - y1,
            x1 - x0,
            y1 - y0,
            fill(*l)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    let text = |s: &mut String, x: f64, y: f64, anchor: &str, body: &str| {
        writeln!(s, r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="14" text-anchor="{anchor}">{body}</text>"#)
            .unwrap();
    };
    if dims >= 1 {
        text(&mut s, MARGIN + SIZE / 2.0, total - 12.0, "middle", &escape(names[0]));
        text(&mut s, MARGIN, MARGIN + SIZE + 16.0, "middle", &format!("{}", dom[0].0));
        text(&mut s, MARGIN + SIZE, MARGIN + SIZE + 16.0, "middle", &format!("{}", dom[0].1));
    }
    if dims == 2 {
        writeln!(
            s,
            r#"<text x="16" y="{y:.1}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 16 {y:.1})">{}</text>"#,
            escape(names[1]),
            y = MARGIN + SIZE / 2.0
        )
        .unwrap();
        text(&mut s, MARGIN - 4.0, MARGIN + SIZE, "end", &format!("{}", dom[1].0));
        text(&mut s, MARGIN - 4.0, MARGIN + 10.0, "end", &format!("{}", dom[1].1));
    }
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
