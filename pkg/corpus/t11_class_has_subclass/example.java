/*@pos*/ class Base { }
/*@pos*/ class Mid extends Base { }
/*@neg*/ class Leaf extends Mid { }
/*@neg*/ class Solo { }
