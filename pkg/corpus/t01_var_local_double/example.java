class Billing {
    void compute() {
        /*@pos*/ double total = 0.0;
        /*@pos*/ double rate = 1.5;
        /*@neg*/ int count = 0;
        /*@neg*/ boolean ready = true;
    }
}
