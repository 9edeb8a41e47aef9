//! Deterministic SVG figures of cylinder pieces, coloured by component.

use ifsx_core::attractor::{refine_cover, tight_ball};
use ifsx_core::charvec::analyze;
use ifsx_core::{Budget, Error, IfsSystem, Result};
use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;
const BAR_HEIGHT: f64 = 24.0;

/// Largest power whose own components are computed for colouring.
const MAX_COLOURED_MAPS: usize = 256;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// Component index of each depth-`depth` cylinder, in lexicographic word order.
fn colour_classes(sys: &IfsSystem, depth: usize, budget: &Budget) -> Result<Vec<usize>> {
    let power = sys.power_within(depth, budget)?;
    let classify = |s: &IfsSystem| -> Result<Vec<usize>> {
        let partition = analyze(s, budget)?.partition;
        Ok((0..s.len()).map(|i| partition.component_of(i).expect("indices are covered")).collect())
    };
    if power.len() <= MAX_COLOURED_MAPS {
        return classify(&power);
    }
    let first = classify(sys)?;
    let block = power.len() / sys.len();
    Ok((0..power.len()).map(|k| first[k / block]).collect())
}

pub fn render_svg(sys: &IfsSystem, depth: usize, budget: &Budget) -> Result<String> {
    if sys.dim() > 2 {
        return Err(Error::Precondition(format!(
            "rendering supports dimensions 1 and 2, not {}",
            sys.dim()
        )));
    }
    let depth = depth.max(1);
    let classes = colour_classes(sys, depth, budget)?;
    let cover = refine_cover(sys, depth, budget)?;
    let base = tight_ball(sys);
    let c: Vec<f64> = base.center().coords().iter().map(|x| x.to_f64()).collect();
    let r = base.radius().to_f64().max(f64::MIN_POSITIVE);
    let scale = (WIDTH - 2.0 * MARGIN) / (2.0 * r);
    let sx = |x: f64| MARGIN + (x - (c[0] - r)) * scale;
    let mut body = String::new();
    let height = if sys.dim() == 1 {
        let y = MARGIN;
        for (entry, &class) in cover.entries().iter().zip(&classes) {
            let mid = entry.ball.center().coords()[0].to_f64();
            let rad = entry.ball.radius().to_f64();
            let _ = writeln!(
                body,
                r#"  <rect class="bar" data-word="{}" x="{:.4}" y="{y:.1}" width="{:.4}" height="{BAR_HEIGHT:.1}" fill="{}"/>"#,
                entry.word,
                sx(mid - rad),
                2.0 * rad * scale,
                PALETTE[class % PALETTE.len()]
            );
        }
        2.0 * MARGIN + BAR_HEIGHT
    } else {
        let sy = |y: f64| MARGIN + ((c[1] + r) - y) * scale;
        for (entry, &class) in cover.entries().iter().zip(&classes) {
            let p = entry.ball.center().coords();
            let _ = writeln!(
                body,
                r#"  <circle class="piece" data-word="{}" cx="{:.4}" cy="{:.4}" r="{:.4}" fill="{}" fill-opacity="0.6"/>"#,
                entry.word,
                sx(p[0].to_f64()),
                sy(p[1].to_f64()),
                entry.ball.radius().to_f64() * scale,
                PALETTE[class % PALETTE.len()]
            );
        }
        WIDTH
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    );
    let _ = writeln!(out, "  <title>depth-{depth} cylinders of a {}-map system</title>", sys.len());
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ifsx_core::catalog;

    #[test]
    fn bar_counts_and_colours() {
        let b = Budget::default();
        let svg = render_svg(&catalog::cantor_quarters(), 6, &b).unwrap();
        assert_eq!(svg.matches("<rect class=\"bar\"").count(), 64);
        let svg = render_svg(&catalog::touching_fifths(), 1, &b).unwrap();
        assert_eq!(svg.matches("<rect class=\"bar\"").count(), 3);
        let colours: std::collections::BTreeSet<&str> =
            PALETTE.iter().copied().filter(|c| svg.contains(&format!("fill=\"{c}\""))).collect();
        assert_eq!(colours.len(), 2);
        assert_eq!(svg, render_svg(&catalog::touching_fifths(), 1, &b).unwrap());
    }
}
