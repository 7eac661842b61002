class Account {
    /*@pos*/ public double rate;
    /*@pos*/ public int kind;
    /*@neg*/ private double fee;
    /*@neg*/ int height;
}
