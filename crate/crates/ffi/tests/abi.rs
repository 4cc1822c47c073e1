use std::ffi::{CStr, CString};
use std::ptr;

use pauliconj_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn circuit(text: &str) -> *mut PcCircuit {
    let mut c = ptr::null_mut();
    assert_eq!(pc_circuit_parse(cs(text).as_ptr(), &mut c), PcStatus::Ok);
    assert!(!c.is_null());
    c
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    pc_string_free(s);
    out
}

#[test]
fn decisions_through_the_abi() {
    unsafe {
        let t = circuit("qubits 1\nT 1\n");
        let mut q = 0usize;
        assert_eq!(pc_circuit_qubits(t, &mut q), PcStatus::Ok);
        assert_eq!(q, 1);
        let mut d = 0usize;
        assert_eq!(pc_circuit_t_depth(t, &mut d), PcStatus::Ok);
        assert_eq!(d, 1);

        let mut yes = false;
        assert_eq!(pc_decide_enic(t, 0, &mut yes), PcStatus::Ok);
        assert!(yes);
        assert_eq!(pc_decide_commute(t, cs("Z").as_ptr(), 0, &mut yes), PcStatus::Ok);
        assert!(yes);
        assert_eq!(pc_decide_commute(t, cs("X").as_ptr(), 0, &mut yes), PcStatus::Ok);
        assert!(!yes);
        assert_eq!(pc_decide_support(t, cs("X").as_ptr(), 0, &mut yes), PcStatus::Ok);
        assert!(yes);

        let mut v = ptr::null_mut();
        assert_eq!(pc_conjugate_value(t, cs("X").as_ptr(), 0, &mut v), PcStatus::Ok);
        assert_eq!(take(v), "(1,0,0,0)/sqrt2^1");

        let empty = circuit("qubits 1\n");
        assert_eq!(pc_decide_enic(empty, 0, &mut yes), PcStatus::Ok);
        assert!(!yes);
        pc_circuit_free(empty);
        pc_circuit_free(t);
    }
}

#[test]
fn presentations_roundtrip() {
    unsafe {
        let c = circuit("qubits 2\nH 1\nT 1\nCZ 1 2\nT 2\nH 2\nT 2\n");
        let mut p = ptr::null_mut();
        assert_eq!(pc_encode(c, cs("XZ").as_ptr(), &mut p), PcStatus::Ok);
        let mut depth = 0usize;
        assert_eq!(pc_presentation_depth(p, &mut depth), PcStatus::Ok);
        assert_eq!(depth, 3);
        let mut text = ptr::null_mut();
        assert_eq!(pc_presentation_to_text(p, &mut text), PcStatus::Ok);
        let text = take(text);
        let mut p2 = ptr::null_mut();
        assert_eq!(pc_presentation_parse(cs(&text).as_ptr(), &mut p2), PcStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(pc_decode(p2, cs("ZZ").as_ptr(), &mut d), PcStatus::Ok);

        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(pc_conjugate_value(c, cs("XZ").as_ptr(), 0, &mut a), PcStatus::Ok);
        assert_eq!(pc_conjugate_value(d, cs("ZZ").as_ptr(), 0, &mut b), PcStatus::Ok);
        assert_eq!(take(a), take(b));

        let mut src = ptr::null_mut();
        assert_eq!(pc_circuit_to_text(d, &mut src), PcStatus::Ok);
        assert!(take(src).starts_with("qubits 2"));
        pc_circuit_free(d);
        pc_presentation_free(p2);
        pc_presentation_free(p);
        pc_circuit_free(c);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(pc_circuit_parse(cs("qubits 1\nT 2\n").as_ptr(), &mut c), PcStatus::Parse);
        assert!(c.is_null());
        let msg = CStr::from_ptr(pc_last_error()).to_str().unwrap();
        assert!(msg.contains("line 2"), "{msg}");

        assert_eq!(pc_circuit_parse(cs("qubits 1\nFOO 1\n").as_ptr(), &mut c), PcStatus::Parse);
        assert_eq!(pc_circuit_parse(ptr::null(), &mut c), PcStatus::NullArgument);
        assert_eq!(pc_circuit_parse(cs("qubits 1").as_ptr(), ptr::null_mut()), PcStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(pc_circuit_parse(bad.as_ptr().cast(), &mut c), PcStatus::InvalidUtf8);

        let t = circuit("qubits 1\nT 1\n");
        let mut yes = false;
        assert_eq!(pc_decide_commute(t, cs("XX").as_ptr(), 0, &mut yes), PcStatus::Parse);
        assert_eq!(pc_decide_commute(t, cs("I").as_ptr(), 0, &mut yes), PcStatus::Invalid);
        assert_eq!(pc_decide_enic(ptr::null(), 0, &mut yes), PcStatus::NullArgument);
        pc_circuit_free(t);

        let deep = circuit("qubits 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\nCZ 1 2\nH 1\nH 2\nT 1\nT 2\n");
        let mut v = ptr::null_mut();
        assert_eq!(pc_conjugate_value(deep, cs("XI").as_ptr(), 2, &mut v), PcStatus::Budget);
        assert!(v.is_null());
        pc_circuit_free(deep);

        pc_circuit_free(ptr::null_mut());
        pc_presentation_free(ptr::null_mut());
        pc_string_free(ptr::null_mut());
        assert_eq!(CStr::from_ptr(pc_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
