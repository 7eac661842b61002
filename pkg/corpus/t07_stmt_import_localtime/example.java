/*@pos*/ import java.time.LocalTime;
/*@neg*/ import java.time.Duration;
/*@neg*/ import java.util.List;

class Clock { }
