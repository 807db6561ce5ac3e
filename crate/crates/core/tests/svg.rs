//! The histogram plot parses as XML and carries one series group and one
//! legend entry per input series.

use halting_core::runner::histogram_svg;

fn series(label: &str, shift: f64) -> (String, Vec<f64>) {
    let tau = (0..200).map(|i| (i as f64 / 199.0 - 0.5) * 4.0 + shift).collect();
    (label.to_string(), tau)
}

fn parse_counts(svg: &str) -> (usize, usize, Vec<String>) {
    let doc = roxmltree::Document::parse(svg).expect("well-formed SVG");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let groups = |class: &str| {
        doc.descendants()
            .filter(|n| n.has_tag_name("g") && n.attribute("class") == Some(class))
            .collect::<Vec<_>>()
    };
    let labels = groups("series")
        .iter()
        .map(|g| g.attribute("data-label").unwrap_or_default().to_string())
        .collect();
    (groups("series").len(), groups("legend").len(), labels)
}

#[test]
fn one_series() {
    let svg = histogram_svg("QR <GOE>", &[series("GOE", 0.0)]).unwrap();
    assert_eq!(parse_counts(&svg), (1, 1, vec!["GOE".to_string()]));
}

#[test]
fn two_series_overlay() {
    let svg = histogram_svg("collapse", &[series("GOE", 0.0), series("B&E", 0.3)]).unwrap();
    let (series, legend, labels) = parse_counts(&svg);
    assert_eq!((series, legend), (2, 2));
    assert_eq!(labels, ["GOE", "B&E"]);
}

#[test]
fn bars_lie_inside_the_canvas() {
    let svg = histogram_svg("t", &[series("a", 0.0)]).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let series = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("series"))
        .unwrap();
    let bars: Vec<_> = series.children().filter(|n| n.has_tag_name("rect")).collect();
    assert!(!bars.is_empty());
    for bar in bars {
        let num = |a: &str| bar.attribute(a).unwrap().parse::<f64>().unwrap();
        assert!(num("height") >= 0.0 && num("y") >= 0.0 && num("x") + num("width") <= 640.0);
    }
}
