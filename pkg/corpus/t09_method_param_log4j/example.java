class Handler {
    /*@pos*/ public void init(Log4jUtils utils) { }
    /*@pos*/ public void reset(Log4jUtils utils, int n) { }
    /*@neg*/ public void stop(int code) { }
    /*@neg*/ public void run() { }
}
