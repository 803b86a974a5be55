use mrd_core::algebra::field_quasifield;
use mrd_core::classify::{are_equivalent, EquivalenceMode};
use mrd_core::constructions::{code3, dickson_nearfield, sec6_c};
use mrd_core::gabidulin::singer_code;
use mrd_core::gf::ExtensionBasis;
use mrd_core::io::{
    export_code, export_form, export_table, export_witness, import_code, import_form, import_table, import_witness,
    matrices_from_text, matrix_to_text,
};
use mrd_core::symmetric::trace_form;
use mrd_core::{Error, FieldSpec};

#[test]
fn code_json_roundtrip_is_byte_identical() {
    let text = export_code(&code3().unwrap());
    let back = import_code(&text).unwrap();
    assert_eq!(back, code3().unwrap());
    assert_eq!(export_code(&back), text);
    assert!(text.ends_with("}\n"));
}

#[test]
fn linear_code_roundtrip() {
    for c in [singer_code(2, 4).unwrap(), sec6_c().unwrap(), singer_code(4, 2).unwrap()] {
        let text = export_code(&c);
        assert!(text.contains("\"basis\""));
        let back = import_code(&text).unwrap();
        assert_eq!(back.elements(), c.elements());
        assert_eq!(export_code(&back), text);
    }
}

#[test]
fn duplicate_matrices_are_rejected() {
    let c = code3().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&export_code(&c)).unwrap();
    let els = v["elements"].as_array_mut().unwrap();
    let first = els[1].clone();
    els.push(first);
    let err = import_code(&v.to_string()).unwrap_err();
    assert!(matches!(err, Error::Validation(_)), "{err:?}");
}

#[test]
fn malformed_documents_are_rejected() {
    let good = export_code(&singer_code(2, 2).unwrap());
    let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
    v["extra"] = serde_json::json!(1);
    assert!(matches!(import_code(&v.to_string()), Err(Error::Parse { .. })));
    let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
    v["linear"] = serde_json::json!(false);
    assert!(matches!(import_code(&v.to_string()), Err(Error::Validation(_))));
    let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
    v["m"] = serde_json::json!(3);
    assert!(matches!(import_code(&v.to_string()), Err(Error::Validation(_))));
    match import_code("{\n  \"m\": 2,\n  oops\n}") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn table_roundtrip_validates() {
    for q in [field_quasifield(2, 4).unwrap(), dickson_nearfield(3, 2).unwrap()] {
        let text = export_table(&q);
        let back = import_table(&text).unwrap();
        assert_eq!(back.table(), q.table());
        assert_eq!(export_table(&back), text);
    }
    let mut v: serde_json::Value = serde_json::from_str(&export_table(&field_quasifield(2, 2).unwrap())).unwrap();
    v["table"][5] = serde_json::json!(0);
    assert!(import_table(&v.to_string()).is_err());
}

#[test]
fn form_roundtrip() {
    let k = FieldSpec::prime(3).unwrap();
    let e = FieldSpec::new(3, 3, None).unwrap();
    let f = trace_form(&ExtensionBasis::polynomial(&k, &e).unwrap()).unwrap();
    let text = export_form(&f);
    assert_eq!(import_form(&text).unwrap().gram, f.gram);
}

#[test]
fn witness_roundtrip() {
    let a = singer_code(2, 3).unwrap();
    let b = mrd_core::GabidulinSpec::new(2, 3, 3, 1).unwrap().code().unwrap();
    let w = are_equivalent(&a, &b, EquivalenceMode::Linear).unwrap().expect("equivalent");
    let text = export_witness(&w);
    let back = import_witness(&text).unwrap();
    assert_eq!(back, w);
    assert_eq!(mrd_core::classify::apply_isometry(&back, &a).unwrap(), b);
}

#[test]
fn text_matrices_roundtrip() {
    let c = code3().unwrap();
    let text: Vec<String> = c.elements().iter().map(matrix_to_text).collect();
    let joined = format!("# code 3\n{}", text.join("\n"));
    let back = matrices_from_text(c.field(), &joined).unwrap();
    assert_eq!(back, c.elements());
    let f11 = FieldSpec::new(11, 2, None).unwrap();
    let m = mrd_core::MatGF::from_rows(f11.clone(), &[vec![0, 120], vec![13, 7]]).unwrap();
    let t = matrix_to_text(&m);
    assert!(t.contains("10:10"));
    assert_eq!(matrices_from_text(&f11, &t).unwrap(), vec![m]);
}
