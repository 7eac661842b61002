class Service {
    /*@pos*/ public CacheConfig foo(Log4jUtils utils) { }
    /*@neg*/ public CacheConfig f2(int utils) { }
    /*@neg*/ public int f3(Log4jUtils utils) { }
}
