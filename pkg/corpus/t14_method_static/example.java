class Util {
    /*@pos*/ public static int max(int a, int b) { return a; }
    /*@pos*/ static void log(String msg) { }
    /*@neg*/ public int size(int raw) { return raw; }
    /*@neg*/ private void reset() { }
}
