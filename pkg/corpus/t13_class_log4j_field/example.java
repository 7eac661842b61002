/*@pos*/ class CacheA {
    public Log4jUtils logger;
}
/*@pos*/ class CacheB {
    public Log4jUtils util;
    public int size;
}
/*@neg*/ class Plain {
    public int count;
}
/*@neg*/ class Hollow { }
