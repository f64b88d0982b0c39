//! Batch processing over many inputs. With the `parallel` feature (on by
//! default) the work is spread across a rayon thread pool; the serial path
//! is always compiled so the two can be compared like for like.

use crate::factorize::{factor, FactorOutcome};
use crate::parse::parse_poly;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sequential map, kept available under every feature set.
pub fn map_serial<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Maps `f` over `items`, preserving order. `jobs` bounds the worker count;
/// `None` lets the pool pick. Without the `parallel` feature this falls back
/// to the serial map and `jobs` is ignored.
#[cfg(feature = "parallel")]
pub fn map_batch<T, R, F>(items: &[T], jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    match jobs {
        Some(n) if n >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool construction")
            .install(|| items.par_iter().map(&f).collect()),
        _ => items.par_iter().map(&f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_batch<T, R, F>(items: &[T], _jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    map_serial(items, f)
}

/// Parses and classifies one line of input, reporting errors in-band so a
/// batch never aborts halfway.
pub fn classify_line(line: &str) -> serde_json::Value {
    let parsed = match parse_poly(line) {
        Ok(f) => f,
        Err(e) => return serde_json::json!({ "input": line, "error": e.to_string() }),
    };
    match crate::classify::classify(&parsed) {
        Ok(c) => {
            let mut v = c.to_json();
            v["input"] = serde_json::json!(line);
            v
        }
        Err(e) => serde_json::json!({ "input": line, "error": e.to_string() }),
    }
}

/// Parses, classifies, and (when reducible) factors one line of input.
pub fn factor_line(line: &str, order: usize) -> serde_json::Value {
    let parsed = match parse_poly(line) {
        Ok(f) => f,
        Err(e) => return serde_json::json!({ "input": line, "error": e.to_string() }),
    };
    match factor(&parsed, order) {
        Ok(FactorOutcome::Certificate(cert)) => {
            let mut v = cert.to_json();
            v["verdict"] = serde_json::json!("Reducible");
            v["input_text"] = serde_json::json!(line);
            v
        }
        Ok(FactorOutcome::Classified(c)) => {
            let mut v = c.to_json();
            v["input"] = serde_json::json!(line);
            v
        }
        Err(e) => serde_json::json!({ "input": line, "error": e.to_string() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINES: [&str; 6] = [
        "6 + x + x^2",
        "1 + 3x",
        "8 + 2x + x^2",
        "4 + 4x + 3x^2 + x^3",
        "49 + 98x + 63x^2 + 14x^3 + x^4",
        "not a polynomial",
    ];

    #[test]
    fn batch_matches_serial_and_preserves_order() {
        let serial = map_serial(&LINES, |l| classify_line(l));
        let batch = map_batch(&LINES, None, |l| classify_line(l));
        let pinned = map_batch(&LINES, Some(2), |l| classify_line(l));
        assert_eq!(serial, batch);
        assert_eq!(serial, pinned);
        assert_eq!(serial[0]["verdict"], "Reducible");
        assert_eq!(serial[1]["verdict"], "Unit");
        assert!(serial[5]["error"].is_string());
    }

    #[test]
    fn factor_lines_produce_certificates() {
        let out = map_batch(&LINES[..5], Some(1), |l| factor_line(l, 16));
        assert_eq!(out[0]["rule"], "NotPrimePower");
        assert_eq!(out[0]["A"].as_array().unwrap().len(), 16);
        assert_eq!(out[1]["verdict"], "Unit");
        assert_eq!(out[3]["rule"], "SimplePAdicRoot");
    }
}
