use kh_core::homology::KhResult;
use kh_wasm::{bracket, family_list, homology};

#[test]
fn trefoil_through_the_bindings() {
    let r: KhResult = serde_json::from_str(&homology("torus(2,3)", "classical").unwrap()).unwrap();
    let z2 = r.groups.iter().find(|g| (g.i, g.j) == (3, 7)).unwrap();
    assert_eq!(z2.torsion, vec![2]);
    assert_eq!(bracket("[1 1 1]").unwrap(), "A^7 + A^3 + A^-1 - A^-9");
}

#[test]
fn errors_are_strings() {
    assert!(homology("torus(2,", "classical").unwrap_err().contains("parse error"));
    assert!(homology("[1]", "sideways").unwrap_err().contains("grading mode"));
    assert!(homology("thm2", "framed").unwrap_err().contains("memory budget"));
}

#[test]
fn listing_has_every_family() {
    let rows: Vec<serde_json::Value> = serde_json::from_str(&family_list()).unwrap();
    assert!(rows.len() >= 11);
    assert!(rows.iter().any(|r| r["name"] == "conj4-base" && r["crossings"] == 14));
}
