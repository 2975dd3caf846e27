//! Runs every example's `main` in-process.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main();
            }
        }
    };
}

example!(parse_and_validate);
example!(construct);
example!(repair);
example!(local_search);
example!(perturb);
example!(solve);
example!(exact_oracle);
example!(bench);

mod gen_fixtures {
    include!("../examples/gen_fixtures.rs");

    #[test]
    fn runs() {
        let dir = tempfile::tempdir().unwrap();
        std::env::set_var("EVRP_FIXTURE_OUT", dir.path());
        main();
        let written = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(written, SHAPES.len() + 1);
        // generation is deterministic, so the checked-in copies must agree
        for entry in std::fs::read_dir(dir.path()).unwrap() {
            let entry = entry.unwrap();
            let fresh = std::fs::read_to_string(entry.path()).unwrap();
            let kept = std::path::Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures"))
                .join(entry.file_name());
            assert_eq!(fresh, std::fs::read_to_string(kept).unwrap());
        }
    }
}
