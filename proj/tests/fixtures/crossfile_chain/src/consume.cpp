JNIEXPORT void JNICALL Java_Forwarder_nativeConsume(JNIEnv *env, jclass cls, jbyteArray data) {
    jbyte *p = env->GetByteArrayElements(data, 0);
    int len = env->GetArrayLength(data);
    char local[16];
    for (int i = 0; i < len; i++) {
        local[i] = p[i];
    }
}
