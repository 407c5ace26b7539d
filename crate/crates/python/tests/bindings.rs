use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module<F: FnOnce(&Bound<'_, PyModule>)>(f: F) {
    Python::attach(|py| {
        let m = PyModule::new(py, "gasproof").unwrap();
        gasproof_py::register(&m).unwrap();
        f(&m);
    });
}

fn try_eval<'py>(m: &Bound<'py, PyModule>, code: &str) -> PyResult<Bound<'py, PyAny>> {
    let py = m.py();
    let locals = PyDict::new(py);
    locals.set_item("g", m)?;
    let code = std::ffi::CString::new(code).unwrap();
    py.eval(&code, None, Some(&locals))
}

fn eval<'py>(m: &Bound<'py, PyModule>, code: &str) -> Bound<'py, PyAny> {
    try_eval(m, code).unwrap()
}

#[test]
fn poly_round_trip_and_evaluation() {
    with_module(|m| {
        let s: String = eval(m, "str(g.Poly('x1^2 + 3*x0*x1 - 1/2'))").extract().unwrap();
        // grlex: degree 2 terms first, x0 before x1
        assert_eq!(s, "3*x0*x1 + x1^2 - 1/2");
        let v: String = eval(m, "g.Poly('x0^2 - x1').evaluate(['3/2', 1])").extract().unwrap();
        assert_eq!(v, "5/4");
    });
}

#[test]
fn recurrence_and_las() {
    with_module(|m| {
        let r = eval(m, "g.Recurrence('(4+x0)/(1+x1)')");
        let eq: String = r.call_method0("equilibrium").unwrap().getattr("value").unwrap().extract().unwrap();
        // x = (4+x)/(1+x) gives x^2 = 4
        assert_eq!(eq, "2");
        let las: String = eval(m, "g.Recurrence('2*x0').las_check().outcome").extract().unwrap();
        assert_eq!(las, "unstable");
    });
}

#[test]
fn prove_and_certificates() {
    with_module(|m| {
        let verdict: String = eval(m, "g.prove_k('x1/(2+x0+x1)', 2).verdict").extract().unwrap();
        assert_eq!(verdict, "true");
        let witness: Vec<String> = eval(m, "g.prove_nonneg(g.Poly('x0^2 - 2*x0*x1 + x1^2/2'), 1).witness")
            .extract()
            .unwrap();
        let x: Vec<f64> = witness.iter().map(|w| frac(w)).collect();
        assert!(x[0] * x[0] - 2.0 * x[0] * x[1] + x[1] * x[1] / 2.0 < 0.0);
        let ok = eval(m, "g.Certificate.from_json(g.prove_nonneg(g.Poly('x0 + x1 + 1'), 1).to_json()).replay()");
        assert!(ok.is_none());
        let err = try_eval(m, "g.Recurrence('x0 +')").unwrap_err();
        assert!(err.is_instance_of::<PyValueError>(m.py()));
    });
}

fn frac(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}
