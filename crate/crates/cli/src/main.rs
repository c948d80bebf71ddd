fn main() {
    println!("plnc");
}
