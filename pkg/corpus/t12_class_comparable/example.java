/*@pos*/ class Cash implements Comparable { }
/*@pos*/ class Flow implements Comparable { }
/*@neg*/ class Solo extends Base { }
/*@neg*/ class Base { }
