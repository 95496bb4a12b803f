// SPDX-License-Identifier: Apache-2.0

use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let out = PathBuf::from(env::var("OUT_DIR").unwrap()).join("shintani.h");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("SHINTANI_H".into()),
        header: Some("/* SPDX-License-Identifier: Apache-2.0 */".into()),
        autogen_warning: Some("/* Generated by cbindgen from src/lib.rs; do not edit. */".into()),
        cpp_compat: true,
        enumeration: cbindgen::EnumConfig { prefix_with_name: true, ..Default::default() },
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("header generation")
        .write_to_file(&out);
    std::fs::create_dir_all(crate_dir.join("include")).unwrap();
    std::fs::copy(&out, crate_dir.join("include/shintani.h")).unwrap();
    println!("cargo:rustc-env=SHINTANI_HEADER={}", out.display());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
