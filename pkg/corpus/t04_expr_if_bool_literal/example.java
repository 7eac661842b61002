class Guard {
    int check(int x) {
        /*@pos*/ if (true) { return 1; }
        /*@pos*/ if (false) { return 2; }
        /*@neg*/ if (x > 0) { return 3; }
        return 0;
    }
}
