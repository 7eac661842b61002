class Filter {
    int scan(boolean a, boolean b, int n) {
        /*@pos*/ if (a && b) { return 1; }
        /*@pos*/ if (a && (n > 2)) { return 2; }
        /*@neg*/ if (a || b) { return 3; }
        /*@neg*/ if (n > 5) { return 4; }
        return 0;
    }
}
