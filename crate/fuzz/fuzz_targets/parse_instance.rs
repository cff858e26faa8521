#![no_main]

use gridex::{parse_instance, serialize_instance};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(inst) = parse_instance(data) {
        let text = serialize_instance(&inst);
        let again = parse_instance(text.as_bytes()).expect("serialized instance reparses");
        assert_eq!(again, inst);
    }
});
