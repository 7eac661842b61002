/*@pos*/ import org.log4j.Logger;
/*@pos*/ import org.log4j.Config;
/*@neg*/ import java.util.List;

class Empty { }
