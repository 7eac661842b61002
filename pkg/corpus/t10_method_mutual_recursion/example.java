class Loop {
    /*@pos*/ int ping() { return echo(); }
    /*@pos*/ int echo() { return ping(); }
    /*@neg*/ int tick() { return tock(); }
    /*@neg*/ int tock() { return boot(); }
    /*@neg*/ int boot() { return vibe(); }
    /*@neg*/ int vibe() { return tick(); }
}
