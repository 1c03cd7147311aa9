//! Exercises the C ABI the way a foreign binding would: through raw
//! pointers and status codes only.

use std::ffi::{c_char, CString};
use std::ptr;

use fuzzy_id3_ffi::*;

fn cstring(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0u8; 512];
    let n = unsafe { fid3_last_error_message(buf.as_mut_ptr().cast::<c_char>(), buf.len()) };
    buf.truncate(n.min(buf.len() - 1));
    String::from_utf8(buf).unwrap()
}

#[test]
fn full_pipeline_through_the_c_api() {
    let schema = cstring("tukutuku");
    let mut dataset: *mut Fid3Dataset = ptr::null_mut();
    let status = unsafe { fid3_dataset_generate(schema.as_ptr(), 53, 0, 0.05, &mut dataset) };
    assert_eq!(status, Fid3Status::Ok, "{}", last_error());
    assert_eq!(unsafe { fid3_dataset_len(dataset) }, 53);

    let config = fid3_config_default();
    let mut model: *mut Fid3Model = ptr::null_mut();
    let status = unsafe { fid3_train(dataset, &config, &mut model) };
    assert_eq!(status, Fid3Status::Ok, "{}", last_error());

    let vars = unsafe { fid3_model_num_variables(model) };
    assert_eq!(vars, 9);
    let mut name = vec![0u8; 64];
    let n = unsafe {
        fid3_model_variable_name(model, 0, name.as_mut_ptr().cast::<c_char>(), name.len())
    };
    name.truncate(n);
    assert_eq!(String::from_utf8(name).unwrap(), "TeamExp");
    assert!(unsafe { fid3_model_node_count(model) } > 0);
    assert!(unsafe { fid3_model_leaf_count(model) } > 0);
    assert!(unsafe { fid3_model_depth(model) } <= 9);

    let values = vec![50.0; vars];
    let mut effort = f64::NAN;
    let status = unsafe { fid3_predict(model, values.as_ptr(), values.len(), &mut effort) };
    assert_eq!(status, Fid3Status::Ok, "{}", last_error());
    assert!(effort.is_finite() && effort > 0.0);

    let mut accuracy = Fid3Accuracy {
        mmre: f64::NAN,
        pred25: f64::NAN,
        mmre_acceptable: false,
        pred25_acceptable: false,
    };
    let status = unsafe { fid3_evaluate(model, dataset, &mut accuracy) };
    assert_eq!(status, Fid3Status::Ok, "{}", last_error());
    assert!(accuracy.mmre >= 0.0);
    assert!((0.0..=100.0).contains(&accuracy.pred25));

    // save, reload, and check the reloaded model predicts identically
    let dir = tempfile::tempdir().unwrap();
    let model_path = cstring(dir.path().join("model.json").to_str().unwrap());
    assert_eq!(
        unsafe { fid3_model_save(model, model_path.as_ptr()) },
        Fid3Status::Ok
    );
    let mut reloaded: *mut Fid3Model = ptr::null_mut();
    assert_eq!(
        unsafe { fid3_model_load(model_path.as_ptr(), &mut reloaded) },
        Fid3Status::Ok
    );
    let mut effort_again = f64::NAN;
    assert_eq!(
        unsafe { fid3_predict(reloaded, values.as_ptr(), values.len(), &mut effort_again) },
        Fid3Status::Ok
    );
    assert_eq!(effort, effort_again);

    // round-trip the dataset through CSV
    let csv_path = cstring(dir.path().join("data.csv").to_str().unwrap());
    assert_eq!(
        unsafe { fid3_dataset_write_csv(dataset, csv_path.as_ptr()) },
        Fid3Status::Ok
    );
    let mut loaded: *mut Fid3Dataset = ptr::null_mut();
    assert_eq!(
        unsafe { fid3_dataset_load_csv(csv_path.as_ptr(), schema.as_ptr(), &mut loaded) },
        Fid3Status::Ok
    );
    assert_eq!(unsafe { fid3_dataset_len(loaded) }, 53);

    // batch prediction produces an output file
    let pred_path = cstring(dir.path().join("pred.csv").to_str().unwrap());
    assert_eq!(
        unsafe { fid3_predict_csv(model, csv_path.as_ptr(), pred_path.as_ptr()) },
        Fid3Status::Ok
    );
    let pred_text = std::fs::read_to_string(dir.path().join("pred.csv")).unwrap();
    assert!(pred_text.lines().next().unwrap().ends_with("predicted_effort"));
    assert_eq!(pred_text.lines().count(), 54);

    unsafe {
        fid3_model_free(reloaded);
        fid3_model_free(model);
        fid3_dataset_free(loaded);
        fid3_dataset_free(dataset);
    }
}

#[test]
fn status_codes_and_error_messages() {
    // null out pointer
    let schema = cstring("tukutuku");
    let status = unsafe { fid3_dataset_generate(schema.as_ptr(), 10, 0, 0.0, ptr::null_mut()) };
    assert_eq!(status, Fid3Status::NullArgument);
    assert!(last_error().contains("null"));

    // unknown schema is a data error
    let bad_schema = cstring("nope");
    let mut dataset: *mut Fid3Dataset = ptr::null_mut();
    let status =
        unsafe { fid3_dataset_generate(bad_schema.as_ptr(), 10, 0, 0.0, &mut dataset) };
    assert_eq!(status, Fid3Status::DataError);
    assert!(last_error().contains("nope"));

    // invalid β is a config error
    let status = unsafe { fid3_dataset_generate(schema.as_ptr(), 10, 0, 0.0, &mut dataset) };
    assert_eq!(status, Fid3Status::Ok);
    let mut config = fid3_config_default();
    config.beta = 1.2;
    let mut model: *mut Fid3Model = ptr::null_mut();
    let status = unsafe { fid3_train(dataset, &config, &mut model) };
    assert_eq!(status, Fid3Status::ConfigError);
    assert!(last_error().contains("significance level"));

    // arity mismatch at prediction time
    let config = fid3_config_default();
    let status = unsafe { fid3_train(dataset, &config, &mut model) };
    assert_eq!(status, Fid3Status::Ok, "{}", last_error());
    let values = [1.0, 2.0];
    let mut effort = 0.0;
    let status = unsafe { fid3_predict(model, values.as_ptr(), values.len(), &mut effort) };
    assert_eq!(status, Fid3Status::ConfigError);
    assert!(last_error().contains("expected 9 values"));

    // missing model file is a data error
    let missing = cstring("/nonexistent/model.json");
    let mut reloaded: *mut Fid3Model = ptr::null_mut();
    let status = unsafe { fid3_model_load(missing.as_ptr(), &mut reloaded) };
    assert_eq!(status, Fid3Status::DataError);

    unsafe {
        fid3_model_free(model);
        fid3_dataset_free(dataset);
    }
}

#[test]
fn generated_header_covers_the_surface() {
    let header_path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/fuzzy_id3.h");
    let header = std::fs::read_to_string(header_path).expect("cbindgen header exists");
    for symbol in [
        "FUZZY_ID3_H",
        "typedef enum Fid3Status",
        "typedef enum Fid3TNorm",
        "typedef struct Fid3Dataset Fid3Dataset;",
        "typedef struct Fid3Model Fid3Model;",
        "fid3_last_error_message",
        "fid3_dataset_generate",
        "fid3_dataset_load_csv",
        "fid3_train",
        "fid3_predict",
        "fid3_predict_csv",
        "fid3_evaluate",
        "fid3_model_save",
        "fid3_model_load",
        "fid3_version",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}
