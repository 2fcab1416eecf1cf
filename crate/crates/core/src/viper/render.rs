//! SVG and CSV emission. Output depends only on the inputs, so identical
//! charts render to identical bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BandMap, PirChart};
use crate::error::{Error, Result};
use crate::space::TradeoffPoint;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartStyle {
    pub width: u32,
    pub height: u32,
    pub title: Option<String>,
}

impl Default for ChartStyle {
    fn default() -> Self {
        Self {
            width: 800,
            height: 480,
            title: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedChart {
    pub svg: String,
    pub csv: String,
}

/// Formats `x` with six significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 6)`, scientific otherwise, trailing zeros
/// trimmed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    left: f64,
    top: f64,
    plot_w: f64,
    plot_h: f64,
}

impl Frame {
    fn new(style: &ChartStyle, x: (f64, f64), y: (f64, f64)) -> Self {
        let (w, h) = (style.width as f64, style.height as f64);
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let ((x0, x1), (y0, y1)) = (widen(x), widen(y));
        Self {
            x0,
            x1,
            y0,
            y1,
            left: MARGIN_LEFT,
            top: MARGIN_TOP,
            plot_w: (w - MARGIN_LEFT - MARGIN_RIGHT).max(10.0),
            plot_h: (h - MARGIN_TOP - MARGIN_BOTTOM).max(10.0),
        }
    }

    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x0) / (self.x1 - self.x0) * self.plot_w
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (1.0 - (y - self.y0) / (self.y1 - self.y0)) * self.plot_h
    }

    fn header(&self, out: &mut String, style: &ChartStyle, x_label: &str, y_label: &str) {
        let (w, h) = (style.width, style.height);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
        if let Some(title) = &style.title {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
                self.left + self.plot_w / 2.0,
                escape(title)
            );
        }
        let bottom = self.top + self.plot_h;
        let right = self.left + self.plot_w;
        let _ = writeln!(
            out,
            r#"<text class="axis-label" x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
            self.left + self.plot_w / 2.0,
            bottom + 40.0
        );
        let _ = writeln!(
            out,
            r#"<text class="axis-label" x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{y_label}</text>"#,
            self.top + self.plot_h / 2.0,
            self.top + self.plot_h / 2.0
        );
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}" stroke="#000"/>"##,
            self.left
        );
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{bottom:.2}" stroke="#000"/>"##,
            self.left, self.top, self.left
        );
        for k in 0..=4 {
            let fx = self.x0 + (self.x1 - self.x0) * k as f64 / 4.0;
            let fy = self.y0 + (self.y1 - self.y0) * k as f64 / 4.0;
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                self.px(fx),
                bottom + 18.0,
                format_sig6(fx)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                self.left - 6.0,
                self.py(fy) + 4.0,
                format_sig6(fy)
            );
        }
    }

    fn legend(&self, out: &mut String, index: usize, label: &str, color: &str) {
        let x = self.left + self.plot_w + 15.0;
        let y = self.top + 10.0 + 18.0 * index as f64;
        let _ = writeln!(
            out,
            r#"<rect class="legend" x="{x:.2}" y="{:.2}" width="12" height="12" fill="{color}"/>"#,
            y - 10.0
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, x + 18.0, escape(label));
    }

    fn polyline(&self, out: &mut String, points: impl Iterator<Item = (f64, f64)>, color: &str, class: &str) {
        let coords: Vec<String> = points
            .map(|(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="{class}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
    }
}

fn color_of(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

/// Renders the PIR chart as a standalone SVG plus the CSV of its series.
pub fn render_chart(chart: &PirChart, bands: &BandMap, style: &ChartStyle) -> Result<RenderedChart> {
    let first = chart.series.first().ok_or(Error::EmptyInput)?;
    let grid = &first.grid;
    let (gmin, gmax) = (grid[0], grid[grid.len() - 1]);
    let frame = Frame::new(style, (gmin, gmax), (0.0, 1.0));
    let color = |id: &str| {
        chart
            .series
            .iter()
            .position(|s| s.framework_id == id)
            .map(color_of)
            .unwrap_or("#cccccc")
    };

    let mut svg = String::new();
    frame.header(&mut svg, style, "Accuracy Loss", "Performance Improvement Ratio");
    for band in &bands.bands {
        let (x0, x1) = (frame.px(band.start), frame.px(band.end));
        let _ = writeln!(
            svg,
            r#"<rect class="band" x="{x0:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" fill-opacity="0.15"><title>{}</title></rect>"#,
            frame.top,
            (x1 - x0).max(0.5),
            frame.plot_h,
            color(&band.framework_id),
            escape(&band.framework_id)
        );
    }
    for (i, s) in chart.series.iter().enumerate() {
        frame.polyline(
            &mut svg,
            s.grid.iter().copied().zip(s.pir.iter().copied()),
            color_of(i),
            "series",
        );
        frame.legend(&mut svg, i, &s.framework_id, color_of(i));
    }
    svg.push_str("</svg>\n");

    Ok(RenderedChart {
        svg,
        csv: series_csv(chart),
    })
}

/// CSV with header `accuracy_loss,<fw>...` and one row per grid point.
pub fn series_csv(chart: &PirChart) -> String {
    let mut csv = String::from("accuracy_loss");
    for s in &chart.series {
        csv.push(',');
        csv.push_str(&s.framework_id);
    }
    csv.push('\n');
    if let Some(first) = chart.series.first() {
        for (k, a) in first.grid.iter().enumerate() {
            csv.push_str(&format_sig6(*a));
            for s in &chart.series {
                csv.push(',');
                csv.push_str(&format_sig6(s.pir[k]));
            }
            csv.push('\n');
        }
    }
    csv
}

/// Scatter of a space with its Pareto frontier drawn as a polyline.
pub fn render_scatter(all: &[TradeoffPoint], frontier: &[TradeoffPoint], style: &ChartStyle) -> Result<String> {
    if all.is_empty() {
        return Err(Error::EmptyInput);
    }
    let fold = |f: fn(&TradeoffPoint) -> f64| {
        all.iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let frame = Frame::new(style, fold(TradeoffPoint::accuracy_loss), fold(TradeoffPoint::runtime));
    let mut svg = String::new();
    frame.header(&mut svg, style, "Accuracy Loss", "Runtime");
    for p in all {
        let _ = writeln!(
            svg,
            r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="3" fill="{}" fill-opacity="0.6"/>"#,
            frame.px(p.accuracy_loss()),
            frame.py(p.runtime()),
            color_of(0)
        );
    }
    frame.polyline(
        &mut svg,
        frontier.iter().map(|p| (p.accuracy_loss(), p.runtime())),
        color_of(1),
        "frontier",
    );
    frame.legend(&mut svg, 0, "configurations", color_of(0));
    frame.legend(&mut svg, 1, "Pareto frontier", color_of(1));
    svg.push_str("</svg>\n");
    Ok(svg)
}
