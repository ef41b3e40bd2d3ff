//! Browser bindings: a curve's circle diagram and rhythm at one prime, the
//! score of a prime, and the sieve frames step by step.

use motivic::config::CurveSelector;
use motivic::curves::{reduce_mod, CountOptions};
use motivic::emit::frames::{render_frame, sieve_frames, Frame};
use motivic::emit::json::scores_json;
use motivic::emit::svg::write_svg_circle;
use motivic::field::is_prime;
use motivic::rhythm::{rhythm_of, Tolerances};
use motivic::score::note_list;
use motivic::sieve::run_all_with_states;
use motivic::suite::{count_all, lpoly_from_counts};
use serde_json::json;
use std::sync::OnceLock;
use wasm_bindgen::prelude::*;

/// Largest prime counted in the browser; 23⁵ elements take a few seconds.
pub const MAX_PRIME: u64 = 23;

fn check_prime(p: u64, max: u64) -> Result<(), String> {
    if p < 3 || !is_prime(p) {
        return Err(format!("{p} is not an odd prime"));
    }
    if p > max {
        return Err(format!("p = {p} is above the in-browser limit of {max}"));
    }
    Ok(())
}

/// JSON with the L-polynomial, root arguments, pitches and the circle SVG.
pub fn curve_at(curve: &str, p: u64) -> Result<String, String> {
    check_prime(p, MAX_PRIME)?;
    let selector = CurveSelector::parse(curve).map_err(|e| e.to_string())?;
    if matches!(selector, CurveSelector::All) {
        return Err("choose one curve".into());
    }
    let spec = selector.curves().map_err(|e| e.to_string())?.remove(0);
    let rc = reduce_mod(&spec, p).map_err(|e| e.to_string())?;
    let tol = Tolerances::default();
    let counts = count_all(&rc, CountOptions::default()).map_err(|e| e.to_string())?;
    let (l, weil) = lpoly_from_counts(p, rc.genus(), &counts, &tol).map_err(|e| e.to_string())?;
    let rp = rhythm_of(&l, &tol).map_err(|e| e.to_string())?;
    let score = note_list(p).map_err(|e| e.to_string())?;
    let pitches: Vec<u8> = (0..rp.alphas.len()).map(|j| score.pitches[j % score.pitches.len()]).collect();
    Ok(json!({
        "curve": spec.name(),
        "p": p,
        "counts": counts,
        "coefficients": l.coeffs,
        "alphas": rp.alphas,
        "period": rp.period,
        "radius": rp.radius,
        "weil_deviation": weil.max_deviation,
        "pitches": pitches,
        "svg": write_svg_circle(&rp, &l),
    })
    .to_string())
}

/// The score of one prime as a one-element JSON array.
pub fn score_of(p: u64) -> Result<String, String> {
    check_prime(p, 1_000_000)?;
    Ok(scores_json(&[note_list(p).map_err(|e| e.to_string())?]))
}

fn frames() -> &'static [Frame] {
    static FRAMES: OnceLock<Vec<Frame>> = OnceLock::new();
    FRAMES.get_or_init(|| {
        let (states, events) = run_all_with_states();
        sieve_frames(&states, &events)
    })
}

pub fn frame_count() -> usize {
    frames().len()
}

/// JSON with the frame's prime, stage, upstairs count and SVG.
pub fn frame_at(step: usize) -> Result<String, String> {
    let f = frames().get(step).ok_or_else(|| format!("step {step} is past the last frame {}", frame_count() - 1))?;
    Ok(json!({
        "file": f.file,
        "p": f.p,
        "stage": format!("{:?}", f.stage).to_lowercase(),
        "upper": f.upper.len(),
        "highlight": f.highlight.len(),
        "svg": render_frame(f),
    })
    .to_string())
}

#[wasm_bindgen(js_name = curveAt)]
pub fn curve_at_js(curve: &str, p: u32) -> Result<String, JsError> {
    curve_at(curve, p as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = scoreOf)]
pub fn score_of_js(p: u32) -> Result<String, JsError> {
    score_of(p as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sieveFrameCount)]
pub fn frame_count_js() -> usize {
    frame_count()
}

#[wasm_bindgen(js_name = sieveFrame)]
pub fn frame_at_js(step: usize) -> Result<String, JsError> {
    frame_at(step).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_at_7() {
        let v: serde_json::Value = serde_json::from_str(&curve_at("c1", 7).unwrap()).unwrap();
        assert_eq!(v["coefficients"][10], 16807);
        assert_eq!(v["alphas"].as_array().unwrap().len(), 10);
        assert_eq!(v["pitches"].as_array().unwrap().len(), 10);
        assert!(v["svg"].as_str().unwrap().contains("<svg"));
    }

    #[test]
    fn rejects_large_and_composite() {
        assert!(curve_at("C1", 29).unwrap_err().contains("limit"));
        assert!(curve_at("C1", 9).unwrap_err().contains("not an odd prime"));
        assert!(curve_at("C1", 5).is_err());
        assert!(curve_at("all", 7).is_err());
    }

    #[test]
    fn score_of_seven() {
        let v: serde_json::Value = serde_json::from_str(&score_of(7).unwrap()).unwrap();
        assert_eq!(v[0]["cf_terms"], json!([16, 1, 5, 2, 2]));
    }

    #[test]
    fn frames_step_through_sieve() {
        assert_eq!(frame_count(), 48);
        let first: serde_json::Value = serde_json::from_str(&frame_at(0).unwrap()).unwrap();
        assert_eq!(first["p"], 7);
        assert_eq!(first["upper"], 963);
        let last: serde_json::Value = serde_json::from_str(&frame_at(47).unwrap()).unwrap();
        assert_eq!(last["p"], 67);
        assert!(frame_at(48).is_err());
    }
}
