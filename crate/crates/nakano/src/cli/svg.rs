//! Static planar plots: 800×800, complex plane with annotated axes.

use std::fmt::Write;

use num_complex::Complex64;

const SIZE: f64 = 800.0;
const PAD: f64 = 60.0;

#[derive(Default)]
pub struct Plot {
    title: String,
    lines: Vec<(Vec<Complex64>, &'static str)>,
    dots: Vec<(Vec<Complex64>, &'static str)>,
    markers: Vec<(Complex64, String, &'static str)>,
}

impl Plot {
    pub fn new(title: impl Into<String>) -> Plot {
        Plot {
            title: title.into(),
            ..Plot::default()
        }
    }

    /// A polyline; non-finite points break it.
    pub fn line(&mut self, pts: Vec<Complex64>, colour: &'static str) {
        self.lines.push((pts, colour));
    }

    pub fn dots(&mut self, pts: Vec<Complex64>, colour: &'static str) {
        self.dots.push((pts, colour));
    }

    pub fn marker(&mut self, z: Complex64, label: impl Into<String>, colour: &'static str) {
        self.markers.push((z, label.into(), colour));
    }

    /// View box: markers, dots and the origin always; leaf curves only within
    /// a few spans of those, the rest is clipped.
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut core: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
        core.extend(self.markers.iter().map(|m| m.0));
        core.extend(self.dots.iter().flat_map(|d| d.0.iter().copied()));
        let bb = |pts: &mut dyn Iterator<Item = Complex64>| {
            pts.filter(|z| z.is_finite()).fold(
                (
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                ),
                |b, z| (b.0.min(z.re), b.1.max(z.re), b.2.min(z.im), b.3.max(z.im)),
            )
        };
        let (x0, x1, y0, y1) = bb(&mut core.iter().copied());
        let span = (x1 - x0).max(y1 - y0).max(1e-3);
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let reach = 2.0 * span;
        let (lx0, lx1, ly0, ly1) = bb(&mut self
            .lines
            .iter()
            .flat_map(|l| l.0.iter().copied())
            .filter(|z| (z.re - cx).abs() <= reach && (z.im - cy).abs() <= reach));
        let (x0, x1, y0, y1) = (x0.min(lx0), x1.max(lx1), y0.min(ly0), y1.max(ly1));
        // Square, with a margin.
        let half = 0.55 * (x1 - x0).max(y1 - y0).max(1e-3);
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        (cx - half, cx + half, cy - half, cy + half)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let inner = SIZE - 2.0 * PAD;
        let px = |x: f64| PAD + (x - x0) / (x1 - x0) * inner;
        let py = |y: f64| PAD + (y1 - y) / (y1 - y0) * inner;
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800" font-family="sans-serif" font-size="12">"##
        );
        let _ = writeln!(w, r##"<rect width="800" height="800" fill="white"/>"##);
        let _ = writeln!(
            w,
            r##"<defs><clipPath id="frame"><rect x="{PAD}" y="{PAD}" width="{inner}" height="{inner}"/></clipPath></defs>"##
        );
        let _ = writeln!(
            w,
            r##"<rect x="{PAD}" y="{PAD}" width="{inner}" height="{inner}" fill="none" stroke="#888"/>"##
        );
        let _ = writeln!(
            w,
            r##"<text x="400" y="30" text-anchor="middle" font-size="16">{}</text>"##,
            escape(&self.title)
        );
        // Ticks and labels.
        let step = nice_step((x1 - x0) / 6.0);
        let mut v = (x0 / step).ceil() * step;
        while v <= x1 {
            let x = px(v);
            let _ = writeln!(
                w,
                r##"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{t}" stroke="#888"/>"##,
                b = SIZE - PAD,
                t = SIZE - PAD + 6.0
            );
            let _ = writeln!(
                w,
                r##"<text x="{x:.2}" y="{y}" text-anchor="middle">{}</text>"##,
                tick(v, step),
                y = SIZE - PAD + 20.0
            );
            v += step;
        }
        let mut v = (y0 / step).ceil() * step;
        while v <= y1 {
            let y = py(v);
            let _ = writeln!(
                w,
                r##"<line x1="{a}" y1="{y:.2}" x2="{PAD}" y2="{y:.2}" stroke="#888"/>"##,
                a = PAD - 6.0
            );
            let _ = writeln!(
                w,
                r##"<text x="{a}" y="{y:.2}" text-anchor="end" dominant-baseline="middle">{}</text>"##,
                tick(v, step),
                a = PAD - 9.0
            );
            v += step;
        }
        let _ = writeln!(
            w,
            r##"<text x="400" y="{}" text-anchor="middle">Re</text>"##,
            SIZE - 12.0
        );
        let _ = writeln!(
            w,
            r##"<text x="16" y="400" text-anchor="middle" transform="rotate(-90 16 400)">Im</text>"##
        );
        let _ = writeln!(w, r##"<g clip-path="url(#frame)">"##);
        // Axes through the origin.
        let (ox, oy) = (px(0.0), py(0.0));
        let _ = writeln!(
            w,
            r##"<line x1="{PAD}" y1="{oy:.2}" x2="{e}" y2="{oy:.2}" stroke="#ccc"/>"##,
            e = SIZE - PAD
        );
        let _ = writeln!(
            w,
            r##"<line x1="{ox:.2}" y1="{PAD}" x2="{ox:.2}" y2="{e}" stroke="#ccc"/>"##,
            e = SIZE - PAD
        );
        for (pts, colour) in &self.lines {
            for run in pts.split(|z| !z.is_finite()).filter(|r| r.len() > 1) {
                let d: Vec<String> = run
                    .iter()
                    .map(|z| format!("{:.2},{:.2}", px(z.re), py(z.im)))
                    .collect();
                let _ = writeln!(
                    w,
                    r##"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"##,
                    d.join(" ")
                );
            }
        }
        for (pts, colour) in &self.dots {
            for z in pts.iter().filter(|z| z.is_finite()) {
                let _ = writeln!(
                    w,
                    r##"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{colour}"/>"##,
                    px(z.re),
                    py(z.im)
                );
            }
        }
        // Origin crosshair.
        let _ = writeln!(
            w,
            r##"<line x1="{a:.2}" y1="{oy:.2}" x2="{b:.2}" y2="{oy:.2}" stroke="black" stroke-width="2"/>"##,
            a = ox - 10.0,
            b = ox + 10.0
        );
        let _ = writeln!(
            w,
            r##"<line x1="{ox:.2}" y1="{a:.2}" x2="{ox:.2}" y2="{b:.2}" stroke="black" stroke-width="2"/>"##,
            a = oy - 10.0,
            b = oy + 10.0
        );
        let _ = writeln!(
            w,
            r##"<text x="{:.2}" y="{:.2}">0</text>"##,
            ox + 6.0,
            oy + 16.0
        );
        let _ = writeln!(w, "</g>");
        for (z, label, colour) in &self.markers {
            let (x, y) = (px(z.re), py(z.im));
            let _ = writeln!(
                w,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{colour}"/>"##
            );
            let _ = writeln!(
                w,
                r##"<text x="{:.2}" y="{:.2}">{}</text>"##,
                x + 8.0,
                y - 8.0,
                escape(label)
            );
        }
        let _ = writeln!(w, "</svg>");
        out
    }
}

fn nice_step(raw: f64) -> f64 {
    let e = 10f64.powf(raw.log10().floor());
    let m = raw / e;
    e * if m < 1.5 {
        1.0
    } else if m < 3.5 {
        2.0
    } else if m < 7.5 {
        5.0
    } else {
        10.0
    }
}

fn tick(v: f64, step: f64) -> String {
    let digits = (-step.log10().floor()).max(0.0) as usize;
    let v = if v.abs() < 1e-9 * step { 0.0 } else { v };
    format!("{v:.digits$}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_an_800_square_with_all_layers() {
        let mut p = Plot::new("a < b");
        p.line(
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(f64::NAN, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(-1.0, 0.0),
            ],
            "blue",
        );
        p.dots(vec![Complex64::new(0.5, 0.5)], "grey");
        p.marker(Complex64::new(1.0, 0.0), "z1", "red");
        let s = p.render();
        assert!(s.contains(r##"viewBox="0 0 800 800""##));
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(s.contains("a &lt; b") && s.contains(">Re<") && s.contains(">z1<"));
        assert_eq!(nice_step(0.31), 0.2);
        assert_eq!(tick(-0.0000000001, 0.5), "0.0");
    }
}
