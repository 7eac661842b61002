class Ledger {
    /*@pos*/ double totalcash;
    /*@pos*/ double sparecash;
    /*@neg*/ double cashbox;
    /*@neg*/ int balance;
}
