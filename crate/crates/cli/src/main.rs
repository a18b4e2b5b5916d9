fn main() {
    println!("taut");
}
